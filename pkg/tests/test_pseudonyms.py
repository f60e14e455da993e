"""
Pseudonym issuance, tracing and the Reply/Update channel.
"""
import random
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import AuthenticationError, CredentialError, EncodingError
from src.protocols.aggregate import CommonString, sign_beacon, verify_single
from src.protocols.cipher import get_cipher
from src.protocols.pseudonyms import (
    KgcState,
    PseudonymKind,
    ReplyPayload,
    Validity,
    issue_pseudonym,
    load_registrations,
    save_registrations,
    trace,
    unwrap_reply,
    wrap_reply,
)
from src.protocols.signcryption import setup
from src.utils.helpers import flip_bit
from settings import TOY_SECURITY_LEVEL


@pytest.fixture
def kgc(params, master) -> KgcState:
    state = KgcState(params, master, random.Random(3))
    for i in range(10):
        state.register_vehicle(f"RID-{i}".encode())
    return state


def _prefix_classifier_accuracy(training, held_out) -> float:
    """Label held-out pseudonyms by the majority RID seen with the same first byte."""
    by_prefix = {}
    for record in training:
        by_prefix.setdefault(record.pseudonym[0], Counter())[record.rid] += 1
    fallback = Counter(record.rid for record in training).most_common(1)[0][0]
    correct = 0
    for record in held_out:
        votes = by_prefix.get(record.pseudonym[0])
        guess = votes.most_common(1)[0][0] if votes else fallback
        correct += guess == record.rid
    return correct / len(held_out)


class TestTracing:

    def test_every_issued_pseudonym_traces(self, kgc):
        for i in range(10):
            rid = f"RID-{i}".encode()
            record = issue_pseudonym(kgc, rid, PseudonymKind.SHORT_TERM, Validity(3, 5))
            assert trace(kgc, record.pseudonym, epoch=4) == rid
        assert kgc.sweep_traceability() == []

    def test_long_term_pseudonyms_trace(self, kgc):
        for rid, registration in kgc.registrations.items():
            assert kgc.trace(registration.ltp) == rid

    def test_random_strings_do_not_trace(self, kgc):
        rng = random.Random(11)
        hits = sum(kgc.trace(rng.randbytes(16)) is not None for _ in range(10_000))
        assert hits == 0

    def test_pseudonyms_are_fresh(self, kgc):
        records = [
            kgc.issue_pseudonym(b"RID-0", PseudonymKind.SHORT_TERM, Validity(0, 0)) for _ in range(100)
        ]
        assert len({r.pseudonym for r in records}) == 100

    def test_strict_validity(self, kgc):
        record = kgc.issue_pseudonym(b"RID-1", PseudonymKind.SHORT_TERM, Validity(3, 5))
        assert kgc.trace(record.pseudonym, epoch=3) == b"RID-1"
        assert kgc.trace(record.pseudonym, epoch=5) == b"RID-1"
        assert kgc.trace(record.pseudonym, epoch=6) is None
        assert kgc.trace(record.pseudonym, epoch=6, strict=False) == b"RID-1"

    def test_other_kgc_cannot_trace(self, params, master, kgc):
        record = kgc.issue_pseudonym(b"RID-2", PseudonymKind.SHORT_TERM, Validity(0, 1))
        stranger = KgcState(params, master, random.Random(4))
        stranger.register_vehicle(b"RID-2")
        assert stranger.trace(record.pseudonym) is None

    def test_wrong_length_or_padding(self, kgc):
        record = kgc.issue_pseudonym(b"RID-3", PseudonymKind.SHORT_TERM, Validity(0, 1))
        assert kgc.trace(record.pseudonym[:-1]) is None
        assert kgc.trace(flip_bit(record.pseudonym, 3)) is None

    def test_pseudonyms_are_not_classifiable_without_lambda(self, params, master):
        accuracies = []
        for seed in range(20):
            state = KgcState(params, master, random.Random(seed))
            for rid in (b"RID-A", b"RID-B"):
                state.enroll(rid)
            labels = random.Random(1000 + seed)
            records = [
                state.issue_pseudonym(labels.choice((b"RID-A", b"RID-B")), PseudonymKind.SHORT_TERM, Validity(0, 0))
                for _ in range(1000)
            ]
            training, held_out = records[:500], records[500:]
            accuracies.append(_prefix_classifier_accuracy(training, held_out))
        assert sum(accuracies) / len(accuracies) <= 0.6

    @given(seed=st.integers(0, 2 ** 32))
    @settings(max_examples=30, deadline=None)
    def test_wider_pseudonyms_trace(self, seed):
        params, master = setup(TOY_SECURITY_LEVEL, "toy", master_key=5, l1_bits=256)
        state = KgcState(params, master, random.Random(seed))
        state.register_vehicle(b"RID-W")
        record = state.issue_pseudonym(b"RID-W", PseudonymKind.SHORT_TERM, Validity(0, 9))
        assert len(record.pseudonym) == 32
        assert state.trace(record.pseudonym, epoch=9) == b"RID-W"


class TestIssuanceErrors:

    def test_unknown_rid(self, kgc):
        with pytest.raises(CredentialError):
            kgc.issue_pseudonym(b"nobody", PseudonymKind.SHORT_TERM, Validity(0, 1))

    def test_empty_window(self, kgc):
        with pytest.raises(CredentialError):
            kgc.issue_pseudonym(b"RID-0", PseudonymKind.SHORT_TERM, Validity(5, 4))

    def test_duplicate_registration(self, kgc):
        with pytest.raises(CredentialError):
            kgc.register_vehicle(b"RID-0")

    @pytest.mark.parametrize("rid", [b"", b"RID\t9", b"RID\n9", b"\xff\xfe"])
    def test_rid_must_fit_the_registration_file(self, kgc, rid):
        with pytest.raises(CredentialError):
            kgc.register_vehicle(rid)
        assert rid not in kgc.registrations

    def test_tracing_only_kgc_cannot_extract(self, params):
        state = KgcState(params, None, random.Random(1))
        with pytest.raises(CredentialError):
            state.register_vehicle(b"RID-X")
        registration = state.enroll(b"RID-X")
        record = state.issue_pseudonym(b"RID-X", PseudonymKind.LONG_TERM, Validity(0, 1))
        assert registration.index == 0
        assert state.trace(record.pseudonym) == b"RID-X"


class TestReplyChannel:

    @pytest.fixture(params=["aes-gcm", "toy-aead"])
    def cipher_params(self, request, params):
        return replace(params, cipher=request.param)

    def _batch(self, kgc, count=4):
        ltp = kgc.registrations[b"RID-4"].ltp
        batch = kgc.issue_short_term_batch(ltp, count, Validity(7, 8))
        payload = ReplyPayload(99, tuple(cred for _, cred in batch), Validity(7, 8))
        return ltp, payload

    @pytest.mark.parametrize("cipher", ["aes-gcm", "toy-aead"])
    @given(
        count=st.integers(0, 8),
        start=st.integers(0, 1000),
        length=st.integers(0, 50),
        nonce=st.integers(0, 2 ** 64 - 1),
        seed=st.integers(0, 2 ** 32),
    )
    @settings(max_examples=500, deadline=None)
    def test_wrap_and_unwrap(self, cipher, count, start, length, nonce, seed):
        params, master = setup(TOY_SECURITY_LEVEL, "toy", master_key=7, cipher=cipher)
        rng = random.Random(seed)
        state = KgcState(params, master, rng)
        _, key = state.register_vehicle(b"RID-R")
        validity = Validity(start, start + length)
        batch = state.issue_short_term_batch(key.ltp, count, validity)
        payload = ReplyPayload(nonce, tuple(cred for _, cred in batch), validity)
        sealed = wrap_reply(params, key, payload, rng)
        assert unwrap_reply(params, key, sealed) == payload

    def test_issued_keys_sign(self, kgc, params, rng):
        ltp, payload = self._batch(kgc, count=2)
        cs = CommonString(b"epoch-7", 7)
        for cred in payload.credentials:
            beacon = sign_beacon(params, cred, b"hello", cs, rng)
            assert verify_single(params, beacon, cs)
            assert kgc.trace(cred.stp, epoch=7) == b"RID-4"

    def test_tampered_ciphertext(self, kgc, cipher_params, rng):
        ltp, payload = self._batch(kgc)
        key = kgc.channel_key_for(ltp)
        sealed = wrap_reply(cipher_params, key, payload, rng)
        for bit in rng.sample(range(8 * len(sealed)), 50):
            with pytest.raises(AuthenticationError):
                unwrap_reply(cipher_params, key, flip_bit(sealed, bit))

    def test_wrong_vehicle_key(self, kgc, cipher_params, rng):
        ltp, payload = self._batch(kgc)
        sealed = wrap_reply(cipher_params, kgc.channel_key_for(ltp), payload, rng)
        other = kgc.channel_key_for(kgc.registrations[b"RID-5"].ltp)
        with pytest.raises(AuthenticationError):
            unwrap_reply(cipher_params, other, sealed)

    def test_unknown_cipher(self):
        with pytest.raises(ValueError):
            get_cipher("rot13")

    def test_unknown_ltp(self, kgc):
        with pytest.raises(CredentialError):
            kgc.channel_key_for(b"\x00" * 16)


class TestRegistrationFile:

    def test_save_and_load(self, kgc, tmp_path):
        path = tmp_path / "registrations.tsv"
        save_registrations(path, kgc)
        records = load_registrations(path)
        assert [rid for rid, _ in records] == [f"RID-{i}".encode() for i in range(10)]
        assert all(k == kgc.registrations[rid].k for rid, k in records)
        assert path.read_text(encoding="utf-8").splitlines()[0].startswith("RID-0\t")

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("RID-0\tabcd\nRID-1 no-tab\n", encoding="utf-8")
        with pytest.raises(EncodingError, match="line 2"):
            load_registrations(path)
