"""
Aggregate Beacon Authentication
===============================

Short-term key extraction, beacon signing under a per-epoch common string
(CS), single verification, aggregation, re-aggregation and aggregate
verification.

    keys:    P0 = H1(STP||0x00), P1 = H1(STP||0x01), Dj = s*Pj
    sign:    c = H3(m, STP, CS), S2 = r*P1gen, S1 = r*psi(H2(CS)) + D0 + c*D1
    verify:  e(S1, P2) = e(S2, H2(CS)) * e(sum(P0_i + c_i*P1_i), U2)

c is recomputed by every verifier and never travels on the wire.

Wire formats (lengths big-endian u32, STP fixed at l1/8 bytes):

    beacon:     len(m) || m || STP || encode(S1) || encode(S2)
    aggregate:  count || count x (len(m) || m || STP) || encode(S1) || encode(S2)
"""
import random
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from src.errors import AggregationError, CommonStringReuseError, CredentialError, EncodingError
from src.pairing import G1Element, G2Element, Group, Scalar
from src.protocols.signcryption import MasterSecret, SystemParams
from src.utils.helpers import pack_u32, take, unpack_u32
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ShortTermCredential:
    stp: bytes
    P0: G1Element
    P1pt: G1Element
    D0: G1Element = field(repr=False)
    D1: G1Element = field(repr=False)


@dataclass(frozen=True)
class CommonString:
    cs: bytes
    epoch: int


@dataclass(frozen=True)
class SignedBeacon:
    m: bytes
    stp: bytes
    S1: G1Element
    S2: G1Element

    def to_bytes(self) -> bytes:
        return pack_u32(len(self.m)) + self.m + self.stp + self.S1.to_bytes() + self.S2.to_bytes()

    @classmethod
    def from_bytes(cls, params: SystemParams, data: bytes) -> "SignedBeacon":
        try:
            m_len, offset = unpack_u32(data, 0)
            m, offset = take(data, offset, m_len)
            stp, offset = take(data, offset, params.pseudonym_bytes)
            S1, S2, offset = _read_signature_pair(params, data, offset)
        except ValueError as e:
            raise EncodingError(f"Malformed beacon: {e}") from e
        if offset != len(data):
            raise EncodingError(f"Beacon has {len(data) - offset} trailing bytes")
        return cls(m, stp, S1, S2)


@dataclass(frozen=True)
class AggregateSignature:
    entries: Tuple[Tuple[bytes, bytes], ...]
    S1: G1Element
    S2: G1Element

    def to_bytes(self) -> bytes:
        body = b"".join(pack_u32(len(m)) + m + stp for m, stp in self.entries)
        return pack_u32(len(self.entries)) + body + self.S1.to_bytes() + self.S2.to_bytes()

    @classmethod
    def from_bytes(cls, params: SystemParams, data: bytes) -> "AggregateSignature":
        try:
            count, offset = unpack_u32(data, 0)
            entries = []
            for _ in range(count):
                m_len, offset = unpack_u32(data, offset)
                m, offset = take(data, offset, m_len)
                stp, offset = take(data, offset, params.pseudonym_bytes)
                entries.append((m, stp))
            S1, S2, offset = _read_signature_pair(params, data, offset)
        except ValueError as e:
            raise EncodingError(f"Malformed aggregate: {e}") from e
        if offset != len(data):
            raise EncodingError(f"Aggregate has {len(data) - offset} trailing bytes")
        return cls(tuple(entries), S1, S2)


def _read_signature_pair(params: SystemParams, data: bytes, offset: int):
    width = params.suite.element_width(Group.G1)
    s1_bytes, offset = take(data, offset, width)
    s2_bytes, offset = take(data, offset, width)
    return params.suite.g1_from_bytes(s1_bytes), params.suite.g1_from_bytes(s2_bytes), offset


class CommonStringLedger:
    """
    Signer-side record of (STP, CS) pairs already used.

    Single-writer: callers serialize access.
    """

    def __init__(self):
        self._used: Set[Tuple[bytes, bytes]] = set()

    def claim(self, stp: bytes, cs: CommonString) -> None:
        key = (stp, cs.cs)
        if key in self._used:
            raise CommonStringReuseError(f"STP {stp.hex()} already signed under CS of epoch {cs.epoch}")
        self._used.add(key)

    def __contains__(self, key: Tuple[bytes, bytes]) -> bool:
        return key in self._used

    def __len__(self) -> int:
        return len(self._used)


def key_point_queries(stp: bytes) -> Tuple[bytes, bytes]:
    """H1 inputs for the two key points: STP||0x00 and STP||0x01."""
    return stp + b"\x00", stp + b"\x01"


def key_points(params: SystemParams, stp: bytes) -> Tuple[G1Element, G1Element]:
    q0, q1 = key_point_queries(stp)
    return params.oracles.h1(q0), params.oracles.h1(q1)


def beacon_challenge_query(m: bytes, stp: bytes, cs: bytes) -> bytes:
    return pack_u32(len(m)) + m + stp + cs


def beacon_challenge(params: SystemParams, m: bytes, stp: bytes, cs: CommonString) -> Scalar:
    """c = H3(m, STP, CS)."""
    return params.oracles.h3(beacon_challenge_query(m, stp, cs.cs))


def common_string_point(params: SystemParams, cs: CommonString) -> G2Element:
    """P_CS = H2(CS)."""
    return params.oracles.h2(cs.cs)


def extract_short_term_key(params: SystemParams, master: MasterSecret, stp: bytes) -> ShortTermCredential:
    if len(stp) != params.pseudonym_bytes:
        raise CredentialError(f"STP must be {params.pseudonym_bytes} bytes, got {len(stp)}")
    P0, P1pt = key_points(params, stp)
    return ShortTermCredential(stp, P0, P1pt, master.s * P0, master.s * P1pt)


def sign_beacon(
    params: SystemParams,
    cred: ShortTermCredential,
    m: bytes,
    cs: CommonString,
    rng: random.Random,
    ledger: Optional[CommonStringLedger] = None,
    r: Optional[Scalar] = None
) -> SignedBeacon:
    """
    Sign a beacon under the common string cs.

    Args:
        params: System parameters.
        cred: Short-term credential of the signer.
        m: Beacon payload.
        cs: Common string of the current epoch.
        rng: Randomness source for r.
        ledger: When given, the (STP, CS) pair is claimed first and reuse raises
            CommonStringReuseError.
        r: Fixes the nonce (test vectors only). Must be nonzero.
    """
    if ledger is not None:
        ledger.claim(cred.stp, cs)
    suite = params.suite
    if r is None:
        r = suite.random_scalar(rng)
    elif suite.scalar(r).is_zero():
        raise ValueError("r must be nonzero")
    r = suite.scalar(r)

    c = beacon_challenge(params, m, cred.stp, cs)
    S2 = r * suite.P1
    S1 = r * suite.psi(common_string_point(params, cs)) + cred.D0 + c * cred.D1
    return SignedBeacon(m, cred.stp, S1, S2)


def _verify_equation(
    params: SystemParams,
    entries: Sequence[Tuple[bytes, bytes]],
    S1: G1Element,
    S2: G1Element,
    cs: CommonString
) -> bool:
    suite = params.suite
    combined = suite.g1_identity()
    for m, stp in entries:
        P0, P1pt = key_points(params, stp)
        combined = combined + P0 + beacon_challenge(params, m, stp, cs) * P1pt
    lhs = suite.pair(S1, suite.P2)
    rhs = suite.pair(S2, common_string_point(params, cs)) * suite.pair(combined, params.U2)
    return lhs == rhs


def verify_single(params: SystemParams, b: SignedBeacon, cs: CommonString) -> bool:
    if len(b.stp) != params.pseudonym_bytes:
        return False
    return _verify_equation(params, [(b.m, b.stp)], b.S1, b.S2, cs)


def verify_aggregate(params: SystemParams, agg: AggregateSignature, cs: CommonString) -> bool:
    if not agg.entries:
        return False
    if any(len(stp) != params.pseudonym_bytes for _, stp in agg.entries):
        return False
    return _verify_equation(params, agg.entries, agg.S1, agg.S2, cs)


def aggregate(params: SystemParams, beacons: Sequence[SignedBeacon]) -> AggregateSignature:
    """Sum the signature components; entries keep the input order."""
    if not beacons:
        raise AggregationError("Cannot aggregate an empty list of beacons")
    S1 = params.suite.g1_identity()
    S2 = params.suite.g1_identity()
    for b in beacons:
        S1 = S1 + b.S1
        S2 = S2 + b.S2
    return AggregateSignature(tuple((b.m, b.stp) for b in beacons), S1, S2)


def re_aggregate(params: SystemParams, aggs: Sequence[AggregateSignature]) -> AggregateSignature:
    """Combine aggregates under one CS; entry lists are concatenated."""
    if not aggs:
        raise AggregationError("Cannot re-aggregate an empty list of aggregates")
    S1 = params.suite.g1_identity()
    S2 = params.suite.g1_identity()
    entries: List[Tuple[bytes, bytes]] = []
    for agg in aggs:
        S1 = S1 + agg.S1
        S2 = S2 + agg.S2
        entries.extend(agg.entries)
    return AggregateSignature(tuple(entries), S1, S2)


def chunked(items: Sequence, size: int) -> Iterable[Sequence]:
    for start in range(0, len(items), size):
        yield items[start:start + size]
