"""
Signcryption of Request messages: setup, extraction, signcrypt/designcrypt.
"""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import BackendUnavailableError, CredentialError, RejectReason, SigncryptionRejected
from src.games.oracle_table import OracleId, OracleTable
from src.protocols.signcryption import (
    InnerSignature,
    RequestPlaintext,
    SigncryptedEnvelope,
    designcrypt,
    extract_rsu_key,
    extract_vehicle_key,
    setup,
    signcrypt,
    verify_inner,
)
from src.utils.helpers import flip_bit
from settings import EXTERNAL_SECURITY_LEVEL, TOY_SECURITY_LEVEL
from tests.conftest import requires_py_ecc


def _request(params, ltp: bytes, rng: random.Random) -> RequestPlaintext:
    return RequestPlaintext(rng.getrandbits(64), ltp, rng.getrandbits(64))


class TestSetup:

    def test_fixed_master_key(self, params, master):
        assert params.U1.value == 7
        assert params.U2.value == 7
        assert master.s == 7

    def test_u1_is_psi_of_u2(self):
        for seed in range(20):
            params, _ = setup(TOY_SECURITY_LEVEL, "toy", rng=random.Random(seed))
            assert params.U1 == params.suite.psi(params.U2)

    def test_seeds_separate(self):
        a, _ = setup(TOY_SECURITY_LEVEL, "toy", rng=random.Random(1))
        b, _ = setup(TOY_SECURITY_LEVEL, "toy", rng=random.Random(2))
        assert a.U2 != b.U2

    def test_l2_covers_z_and_request(self, params):
        assert params.request_bytes == 8 + 16 + 8
        assert params.l2_bits == 8 * (2 + params.request_bytes)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            setup(0, "toy")
        with pytest.raises(ValueError):
            setup(TOY_SECURITY_LEVEL, "toy", l1_bits=100)
        with pytest.raises(ValueError):
            setup(TOY_SECURITY_LEVEL, "toy", master_key=1009)

    def test_unknown_backend(self):
        with pytest.raises(BackendUnavailableError):
            setup(TOY_SECURITY_LEVEL, "lattice")

    @pytest.mark.slow
    @requires_py_ecc
    def test_external_refuses_excess_security(self):
        with pytest.raises(BackendUnavailableError):
            setup(EXTERNAL_SECURITY_LEVEL + 1, "external", rng=random.Random(0))


class TestExtraction:

    def test_vehicle_key_vector(self, sc1):
        cred = extract_vehicle_key(sc1.params, sc1.master, sc1.ltp)
        assert cred.P_V.value == 3
        assert cred.LTK.value == 21

    def test_rsu_key_vector(self, sc1):
        rsu = extract_rsu_key(sc1.params, sc1.master, sc1.id_r)
        assert rsu.P_R.value == 4
        assert rsu.B.value == 28

    def test_vehicle_pairing_invariant(self, params, master, rng):
        suite = params.suite
        for _ in range(100):
            cred = extract_vehicle_key(params, master, rng.randbytes(params.pseudonym_bytes))
            assert suite.pair(cred.LTK, suite.P2) == suite.pair(cred.P_V, params.U2)

    def test_rsu_pairing_invariant(self, params, master):
        suite = params.suite
        for i in range(50):
            rsu = extract_rsu_key(params, master, f"RSU-{i}".encode())
            assert suite.pair(suite.P1, rsu.B) == suite.pair(params.U1, rsu.P_R)

    def test_extraction_is_deterministic(self, params, master):
        ltp = b"\x11" * params.pseudonym_bytes
        assert extract_vehicle_key(params, master, ltp) == extract_vehicle_key(params, master, ltp)

    def test_distinct_rsus_rarely_share_keys(self, params, master):
        keys = {extract_rsu_key(params, master, f"RSU-{i}".encode()).B for i in range(40)}
        assert len(keys) >= 35

    def test_malformed_identities(self, params, master):
        with pytest.raises(CredentialError):
            extract_vehicle_key(params, master, b"short")
        with pytest.raises(CredentialError):
            extract_rsu_key(params, master, b"")


class TestSigncryptVector:

    def test_sc1(self, sc1, rng):
        params = sc1.params
        cred = extract_vehicle_key(params, sc1.master, sc1.ltp)
        env = signcrypt(params, cred, sc1.m, sc1.id_r, rng, r=2)
        assert env.Y.value == 6
        assert env.y == (147).to_bytes(2, "big") + sc1.m.encode(params.pseudonym_bytes)
        assert len(env.to_bytes()) == 2 + params.l2_bytes

    def test_sc1_designcrypts(self, sc1, rng):
        params = sc1.params
        cred = extract_vehicle_key(params, sc1.master, sc1.ltp)
        rsu = extract_rsu_key(params, sc1.master, sc1.id_r)
        m, sig = designcrypt(params, rsu, signcrypt(params, cred, sc1.m, sc1.id_r, rng, r=2))
        assert m == sc1.m
        assert (sig.Y.value, sig.Z.value) == (6, 147)

    def test_sc1_inner_signature(self, sc1):
        suite = sc1.params.suite
        sig = InnerSignature(6 * suite.P1, 147 * suite.P1)
        assert verify_inner(sc1.params, sc1.m, sig)
        assert not verify_inner(sc1.params, sc1.m, InnerSignature(sig.Y, sig.Z + suite.P1))

    def test_signature_bound_to_ltp(self, sc1):
        suite = sc1.params.suite
        sig = InnerSignature(6 * suite.P1, 147 * suite.P1)
        other = RequestPlaintext(sc1.m.n, b"\xee" * sc1.params.pseudonym_bytes, sc1.m.tau)
        assert not verify_inner(sc1.params, other, sig)

    def test_zero_z_still_verifies(self, toy_setup, rng):
        base, master = toy_setup
        suite = base.suite
        table = OracleTable(suite, random.Random(9))
        params = base.with_oracles(table)
        ltp = b"\x05" * params.pseudonym_bytes
        cred = extract_vehicle_key(params, master, ltp)
        m = RequestPlaintext(1, ltp, 2)
        r = 3
        table.program(
            OracleId.H3,
            (r * cred.P_V).to_bytes() + m.encode(params.pseudonym_bytes),
            suite.scalar(suite.q - r),
        )

        env = signcrypt(params, cred, m, b"RSU-Z", rng, r=r)
        recovered, sig = designcrypt(params, extract_rsu_key(params, master, b"RSU-Z"), env)
        assert sig.Z.is_identity()
        assert recovered == m
        assert verify_inner(params, recovered, sig)

    def test_ltp_mismatch(self, params, master, rng):
        cred = extract_vehicle_key(params, master, b"\x01" * params.pseudonym_bytes)
        m = RequestPlaintext(1, b"\x02" * params.pseudonym_bytes, 1)
        with pytest.raises(CredentialError):
            signcrypt(params, cred, m, b"RSU-1", rng)

    def test_zero_nonce_refused(self, params, master, rng):
        ltp = b"\x01" * params.pseudonym_bytes
        cred = extract_vehicle_key(params, master, ltp)
        with pytest.raises(ValueError):
            signcrypt(params, cred, RequestPlaintext(1, ltp, 1), b"RSU-1", rng, r=1009)


class TestRoundtrip:

    def test_thousand_roundtrips(self, params, master, rng):
        rsus = [extract_rsu_key(params, master, f"RSU-{i}".encode()) for i in range(5)]
        for _ in range(1000):
            ltp = rng.randbytes(params.pseudonym_bytes)
            cred = extract_vehicle_key(params, master, ltp)
            rsu = rng.choice(rsus)
            m = _request(params, ltp, rng)
            recovered, sig = designcrypt(params, rsu, signcrypt(params, cred, m, rsu.id_r, rng))
            assert recovered == m
            assert verify_inner(params, recovered, sig)

    @given(n=st.integers(0, 2 ** 64 - 1), tau=st.integers(0, 2 ** 64 - 1), seed=st.integers(0, 2 ** 32))
    @settings(max_examples=100, deadline=None)
    def test_any_request_survives(self, n, tau, seed):
        params, master = setup(TOY_SECURITY_LEVEL, "toy", master_key=7)
        rng = random.Random(seed)
        ltp = rng.randbytes(params.pseudonym_bytes)
        m = RequestPlaintext(n, ltp, tau)
        env = signcrypt(params, extract_vehicle_key(params, master, ltp), m, b"RSU-1", rng)
        wire = SigncryptedEnvelope.from_bytes(params, env.to_bytes())
        assert designcrypt(params, extract_rsu_key(params, master, b"RSU-1"), wire)[0] == m

    def test_fresh_randomness_unlinks_envelopes(self, params, master, rng):
        ltp = b"\x07" * params.pseudonym_bytes
        cred = extract_vehicle_key(params, master, ltp)
        m = RequestPlaintext(5, ltp, 5)
        envelopes = [signcrypt(params, cred, m, b"RSU-1", rng, r=r) for r in range(1, 31)]
        assert len({env.Y for env in envelopes}) == 30
        assert len({env.y for env in envelopes}) == 30


class TestRejection:

    @pytest.fixture
    def sealed(self, params, master, rng):
        ltp = b"\x42" * params.pseudonym_bytes
        cred = extract_vehicle_key(params, master, ltp)
        rsu = extract_rsu_key(params, master, b"RSU-1")
        return rsu, signcrypt(params, cred, RequestPlaintext(9, ltp, 9), rsu.id_r, rng)

    def test_wrong_rsu(self, params, master, sealed):
        _, env = sealed
        other = extract_rsu_key(params, master, b"RSU-2")
        with pytest.raises(SigncryptionRejected):
            designcrypt(params, other, env)

    def test_single_bit_tamper(self, params, sealed):
        rsu, env = sealed
        wire = env.to_bytes()
        rng = random.Random(77)
        rejected = 0
        for _ in range(200):
            try:
                tampered = SigncryptedEnvelope.from_bytes(params, flip_bit(wire, rng.randrange(8 * len(wire))))
                designcrypt(params, rsu, tampered)
            except SigncryptionRejected:
                rejected += 1
        assert rejected >= 199

    def test_length_reason(self, params, sealed):
        rsu, env = sealed
        with pytest.raises(SigncryptionRejected) as excinfo:
            designcrypt(params, rsu, SigncryptedEnvelope(env.Y, env.y[:-1]))
        assert excinfo.value.reason is RejectReason.LENGTH
        with pytest.raises(SigncryptionRejected) as excinfo:
            SigncryptedEnvelope.from_bytes(params, env.to_bytes() + b"\x00")
        assert excinfo.value.reason is RejectReason.LENGTH

    def test_parse_reason(self, params, sealed):
        _, env = sealed
        with pytest.raises(SigncryptionRejected) as excinfo:
            SigncryptedEnvelope.from_bytes(params, b"\xff\xff" + env.y)
        assert excinfo.value.reason is RejectReason.PARSE

    def test_equation_reason(self, sc1, rng):
        params = sc1.params
        rsu = extract_rsu_key(params, sc1.master, sc1.id_r)
        m_bytes = sc1.m.encode(params.pseudonym_bytes)
        # Z = 148 under the zero mask is well-formed but off by P1
        env = SigncryptedEnvelope(6 * params.suite.P1, (148).to_bytes(2, "big") + m_bytes)
        with pytest.raises(SigncryptionRejected) as excinfo:
            designcrypt(params, rsu, env)
        assert excinfo.value.reason is RejectReason.EQUATION

    def test_out_of_range_z_is_a_parse_failure(self, sc1):
        params = sc1.params
        rsu = extract_rsu_key(params, sc1.master, sc1.id_r)
        env = SigncryptedEnvelope(6 * params.suite.P1, b"\xff\xff" + sc1.m.encode(params.pseudonym_bytes))
        with pytest.raises(SigncryptionRejected) as excinfo:
            designcrypt(params, rsu, env)
        assert excinfo.value.reason is RejectReason.PARSE
