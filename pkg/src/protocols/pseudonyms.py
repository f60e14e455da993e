"""
Pseudonym Lifecycle
===================

The KGC binds long-term and short-term pseudonyms to real identities (RID)
with its tracing key lambda, traces them back, and wraps Reply/Update payloads
(STPs plus their short-term keys) under each vehicle's channel key k.

Pseudonym construction. One AES block under lambda over

    registration index (4) || kind (1) || valid_from (2) || valid_to (2)
    || issuance serial (3) || zero check (4)

zero-padded to l1 bits. Trace decrypts the first block and accepts only when
the check bytes and the padding are zero, so a random l1-bit string traces to
an identity with probability about 2^-32 and no database scan is needed. The
serial makes every pseudonym fresh, and without lambda the blocks are
indistinguishable from random.

Reply payload (plaintext, before AEAD under k with the LTP as associated data):

    request nonce (8) || count (2) || count x (STP || encode(D0) || encode(D1))
    || valid_from (4) || valid_to (4)

Registration file: one record per line, `RID<TAB>hex(k)`.
"""
import random
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from src.errors import AuthenticationError, CredentialError, EncodingError
from src.pairing import Group
from src.protocols.aggregate import ShortTermCredential, extract_short_term_key, key_points
from src.protocols.cipher import get_cipher
from src.protocols.signcryption import (
    LongTermCredential,
    MasterSecret,
    SystemParams,
    extract_vehicle_key,
)
from src.utils.helpers import take
from src.utils.logger import get_logger
from settings import CHANNEL_KEY_BYTES, NONCE_BYTES, TRACE_KEY_BYTES

logger = get_logger(__name__)

BLOCK_BYTES = 16
MAX_EPOCH = 0xFFFF
MAX_SERIAL = 0xFFFFFF


class PseudonymKind(IntEnum):
    LONG_TERM = 0
    SHORT_TERM = 1


@dataclass(frozen=True)
class Validity:
    start_epoch: int
    end_epoch: int

    def covers(self, epoch: int) -> bool:
        return self.start_epoch <= epoch <= self.end_epoch


@dataclass(frozen=True)
class PseudonymRecord:
    pseudonym: bytes
    rid: bytes
    validity: Validity
    kind: PseudonymKind


@dataclass(frozen=True)
class VehicleChannelKey:
    ltp: bytes
    k: bytes = field(repr=False)


@dataclass(frozen=True)
class KgcTraceKey:
    lam: bytes = field(repr=False)


@dataclass
class VehicleRegistration:
    rid: bytes
    index: int
    k: bytes = field(repr=False)
    ltp: Optional[bytes] = None


@dataclass(frozen=True)
class ReplyPayload:
    request_nonce: int
    credentials: Tuple[ShortTermCredential, ...]
    validity: Validity


def _is_printable_rid(rid: bytes) -> bool:
    """RIDs land verbatim in the registration TSV."""
    try:
        text = rid.decode("utf-8")
    except UnicodeDecodeError:
        return False
    return bool(text) and text.isprintable()


class KgcState:
    """
    Key Generation Center state: master secret, tracing key, registrations
    and the issuance ledger.

    `master` may be None for a tracing-only KGC (a reduction simulator that
    issues and traces pseudonyms but never extracts keys).

    Single-writer. `trace` only reads and may run alongside issuance under a
    readers-writer discipline enforced by the caller.
    """

    def __init__(
        self,
        params: SystemParams,
        master: Optional[MasterSecret],
        rng: random.Random,
        trace_key: Optional[KgcTraceKey] = None
    ):
        if params.pseudonym_bytes < BLOCK_BYTES:
            raise CredentialError(f"Pseudonyms need at least {8 * BLOCK_BYTES} bits")
        self.params = params
        self.master = master
        self.rng = rng
        self.trace_key = trace_key or KgcTraceKey(rng.randbytes(TRACE_KEY_BYTES))
        self.registrations: Dict[bytes, VehicleRegistration] = {}
        self._by_index: List[VehicleRegistration] = []
        self._by_ltp: Dict[bytes, VehicleRegistration] = {}
        self.issued: List[PseudonymRecord] = []
        self._serial = 0

    def _block_cipher(self) -> Cipher:
        return Cipher(algorithms.AES(self.trace_key.lam), modes.ECB())

    def _secret(self) -> MasterSecret:
        if self.master is None:
            raise CredentialError("This KGC holds no master secret and cannot extract keys")
        return self.master

    def enroll(self, rid: bytes, channel_key: Optional[bytes] = None) -> VehicleRegistration:
        """Record a real identity and its channel key without issuing anything."""
        if rid in self.registrations:
            raise CredentialError(f"RID {rid!r} is already registered")
        if not _is_printable_rid(rid):
            raise CredentialError(f"RID {rid!r} must be non-empty printable UTF-8")
        k = channel_key if channel_key is not None else self.rng.randbytes(CHANNEL_KEY_BYTES)
        registration = VehicleRegistration(rid=rid, index=len(self._by_index), k=k)
        self.registrations[rid] = registration
        self._by_index.append(registration)
        return registration

    def register_vehicle(
        self,
        rid: bytes,
        channel_key: Optional[bytes] = None
    ) -> Tuple[LongTermCredential, VehicleChannelKey]:
        """Register a real identity, issue its LTP and extract its long-term key."""
        master = self._secret()
        registration = self.enroll(rid, channel_key)
        record = self.issue_pseudonym(rid, PseudonymKind.LONG_TERM, Validity(0, MAX_EPOCH))
        registration.ltp = record.pseudonym
        self._by_ltp[record.pseudonym] = registration
        logger.debug("Registered vehicle #%d", registration.index)
        credential = extract_vehicle_key(self.params, master, record.pseudonym)
        return credential, VehicleChannelKey(record.pseudonym, registration.k)

    def issue_pseudonym(self, rid: bytes, kind: PseudonymKind, validity: Validity) -> PseudonymRecord:
        registration = self.registrations.get(rid)
        if registration is None:
            raise CredentialError(f"RID {rid!r} is not registered")
        if validity.start_epoch > validity.end_epoch:
            raise CredentialError(f"Empty validity window {validity}")
        if not 0 <= validity.start_epoch <= validity.end_epoch <= MAX_EPOCH:
            raise CredentialError(f"Validity {validity} exceeds the epoch range")
        if self._serial > MAX_SERIAL:
            raise CredentialError("Pseudonym serial space exhausted")

        block = (
            registration.index.to_bytes(4, "big")
            + bytes([int(kind)])
            + validity.start_epoch.to_bytes(2, "big")
            + validity.end_epoch.to_bytes(2, "big")
            + self._serial.to_bytes(3, "big")
            + bytes(4)
        )
        self._serial += 1
        encryptor = self._block_cipher().encryptor()
        sealed = encryptor.update(block) + encryptor.finalize()
        pseudonym = sealed + bytes(self.params.pseudonym_bytes - BLOCK_BYTES)

        record = PseudonymRecord(pseudonym, rid, validity, kind)
        self.issued.append(record)
        return record

    def _open(self, pseudonym: bytes) -> Optional[Tuple[VehicleRegistration, PseudonymKind, Validity]]:
        if len(pseudonym) != self.params.pseudonym_bytes:
            return None
        if any(pseudonym[BLOCK_BYTES:]):
            return None
        decryptor = self._block_cipher().decryptor()
        block = decryptor.update(pseudonym[:BLOCK_BYTES]) + decryptor.finalize()
        if any(block[12:]):
            return None
        index = int.from_bytes(block[0:4], "big")
        if index >= len(self._by_index) or block[4] not in (0, 1):
            return None
        validity = Validity(int.from_bytes(block[5:7], "big"), int.from_bytes(block[7:9], "big"))
        return self._by_index[index], PseudonymKind(block[4]), validity

    def trace(self, pseudonym: bytes, epoch: Optional[int] = None, strict: bool = True) -> Optional[bytes]:
        """
        Map a pseudonym back to its real identity.

        Returns None when the pseudonym does not authenticate under lambda, or
        when `strict` is set and `epoch` falls outside its validity window.
        """
        opened = self._open(pseudonym)
        if opened is None:
            return None
        registration, _, validity = opened
        if strict and epoch is not None and not validity.covers(epoch):
            return None
        return registration.rid

    def channel_key_for(self, ltp: bytes) -> VehicleChannelKey:
        registration = self._by_ltp.get(ltp)
        if registration is None:
            raise CredentialError("No channel key registered for this LTP")
        return VehicleChannelKey(ltp, registration.k)

    def issue_short_term_batch(
        self,
        ltp: bytes,
        count: int,
        validity: Validity
    ) -> List[Tuple[PseudonymRecord, ShortTermCredential]]:
        """Issue `count` STPs for the vehicle holding `ltp`, each with its STK."""
        master = self._secret()
        registration = self._by_ltp.get(ltp)
        if registration is None:
            raise CredentialError("Unknown LTP")
        batch = []
        for _ in range(count):
            record = self.issue_pseudonym(registration.rid, PseudonymKind.SHORT_TERM, validity)
            batch.append((record, extract_short_term_key(self.params, master, record.pseudonym)))
        return batch

    def sweep_traceability(self) -> List[PseudonymRecord]:
        """Return every issued record that does not trace to its RID."""
        return [
            record for record in self.issued
            if self.trace(record.pseudonym, strict=False) != record.rid
        ]


def issue_pseudonym(kgc_state: KgcState, rid: bytes, kind: PseudonymKind, validity: Validity) -> PseudonymRecord:
    return kgc_state.issue_pseudonym(rid, kind, validity)


def trace(kgc_state: KgcState, pseudonym: bytes, epoch: Optional[int] = None, strict: bool = True) -> Optional[bytes]:
    return kgc_state.trace(pseudonym, epoch, strict)


def encode_reply(params: SystemParams, payload: ReplyPayload) -> bytes:
    parts = [
        payload.request_nonce.to_bytes(NONCE_BYTES, "big"),
        len(payload.credentials).to_bytes(2, "big"),
    ]
    for cred in payload.credentials:
        parts.extend([cred.stp, cred.D0.to_bytes(), cred.D1.to_bytes()])
    parts.append(payload.validity.start_epoch.to_bytes(4, "big"))
    parts.append(payload.validity.end_epoch.to_bytes(4, "big"))
    return b"".join(parts)


def decode_reply(params: SystemParams, data: bytes) -> ReplyPayload:
    suite = params.suite
    width = suite.element_width(Group.G1)
    try:
        nonce, offset = take(data, 0, NONCE_BYTES)
        count_bytes, offset = take(data, offset, 2)
        credentials = []
        for _ in range(int.from_bytes(count_bytes, "big")):
            stp, offset = take(data, offset, params.pseudonym_bytes)
            d0, offset = take(data, offset, width)
            d1, offset = take(data, offset, width)
            P0, P1pt = key_points(params, stp)
            credentials.append(
                ShortTermCredential(stp, P0, P1pt, suite.g1_from_bytes(d0), suite.g1_from_bytes(d1))
            )
        start, offset = take(data, offset, 4)
        end, offset = take(data, offset, 4)
    except ValueError as e:
        raise EncodingError(f"Malformed reply payload: {e}") from e
    if offset != len(data):
        raise EncodingError("Reply payload has trailing bytes")
    validity = Validity(int.from_bytes(start, "big"), int.from_bytes(end, "big"))
    return ReplyPayload(int.from_bytes(nonce, "big"), tuple(credentials), validity)


def wrap_reply(
    params: SystemParams,
    key: VehicleChannelKey,
    payload: ReplyPayload,
    rng: random.Random
) -> bytes:
    """Encrypt a Reply/Update payload for the vehicle owning `key`."""
    return get_cipher(params.cipher).encrypt(key.k, encode_reply(params, payload), key.ltp, rng)


def unwrap_reply(params: SystemParams, key: VehicleChannelKey, ciphertext: bytes) -> ReplyPayload:
    """Decrypt and parse a Reply/Update payload; raises AuthenticationError on tampering."""
    plaintext = get_cipher(params.cipher).decrypt(key.k, ciphertext, key.ltp)
    try:
        return decode_reply(params, plaintext)
    except EncodingError as e:
        raise AuthenticationError(f"Authenticated payload failed to parse: {e}") from e


def save_registrations(path: Union[str, Path], kgc_state: KgcState) -> None:
    lines = [
        f"{registration.rid.decode('utf-8')}\t{registration.k.hex()}\n"
        for registration in kgc_state.registrations.values()
    ]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_registrations(path: Union[str, Path]) -> List[Tuple[bytes, bytes]]:
    """Parse a registration file into (RID, k) pairs."""
    records = []
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rid, key_hex = line.split("\t")
            records.append((rid.encode("utf-8"), bytes.fromhex(key_hex.strip())))
        except ValueError as e:
            raise EncodingError(f"line {line_number}: expected RID<TAB>hex(k)") from e
    return records
