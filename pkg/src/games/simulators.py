"""
Reduction Simulators
====================

Challengers that answer an adversary's hash and protocol queries from an
`OracleTable` while embedding a Diffie-Hellman instance, so that they never
hold the master secret s.

    BdhConfidentialitySimulator   signcryption confidentiality, instance
                                  (aP2, bP2, cP1); the target RSU's H2 is aP2
    CdhSigncryptionSimulator      signcryption unforgeability, instance
                                  (aP2, bP2); the target LTP's H1 is psi(aP2)
    CdhAggregateSimulator         beacon unforgeability, U2 = bP2; the target
                                  STP's key points carry a U1 component and one
                                  designated common string hashes to beta*P2

In every simulator U2 is the instance's bP2, so U1 = psi(bP2).

The two keyless signers, `simulate_signcrypt_without_key` and
`simulate_sign_without_key`, are usable on their own: they only need the
relevant table entries to carry trapdoors.
"""
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.errors import CredentialError, EncodingError, ExtractionError, SimulationAbort
from src.games.oracle_table import (
    CommonStringTrapdoor,
    ExponentTrapdoor,
    KeyPointTrapdoor,
    OracleEntry,
    OracleId,
    OracleTable,
    QueryLedger,
)
from src.pairing import BilinearSuite, G1Element, G2Element, GtElement, Group, Scalar
from src.protocols.aggregate import (
    CommonString,
    ShortTermCredential,
    SignedBeacon,
    beacon_challenge,
    beacon_challenge_query,
    key_point_queries,
    key_points,
)
from src.protocols.cipher import get_cipher
from src.protocols.pseudonyms import KgcState, PseudonymKind, Validity
from src.protocols.signcryption import (
    InnerSignature,
    LongTermCredential,
    RequestPlaintext,
    RsuCredential,
    SigncryptedEnvelope,
    SystemParams,
    public_params,
    signcrypt,
    verify_inner,
)
from src.utils.helpers import take, unpack_u32, xor_bytes
from src.utils.logger import get_logger
from settings import CHANNEL_KEY_BYTES, DEFAULT_CIPHER, DEFAULT_L1_BITS

logger = get_logger(__name__)


def _abort(table: OracleTable, query: bytes, reason: str) -> SimulationAbort:
    table.record("abort", query)
    logger.warning("Simulation aborted: %s", reason)
    return SimulationAbort(reason)


def _rsu_trapdoor(table: OracleTable, params: SystemParams, id_r: bytes) -> Scalar:
    """x' with H2(ID_R) = x'*P2."""
    params.oracles.h2(id_r)
    trapdoor = table.trapdoor(OracleId.H2, id_r)
    if not isinstance(trapdoor, ExponentTrapdoor) or trapdoor.x is None:
        raise _abort(table, id_r, "no exponent trapdoor for the recipient identity")
    return trapdoor.x


def simulate_signcrypt_without_key(
    table: OracleTable,
    params: SystemParams,
    m: RequestPlaintext,
    ltp_target: bytes,
    id_r: bytes,
    rng: random.Random,
    r: Optional[Scalar] = None,
    h: Optional[Scalar] = None
) -> SigncryptedEnvelope:
    """
    Signcrypt for `ltp_target` without its LTK.

    Y = r*P1 - h*H1(LTP), Z = r*U1 and H3(Y||m) is back-patched to h. The
    mask uses w = e(Y, x'*U2), which equals what the RSU computes with B.

    Raises:
        SimulationAbort: H3 already answered (Y||m), or ID_R carries no trapdoor.
    """
    if m.ltp != ltp_target:
        raise CredentialError("Request LTP does not match the simulated sender")
    suite = params.suite
    r = suite.scalar(r) if r is not None else suite.random_scalar(rng)
    h = suite.scalar(h) if h is not None else suite.random_scalar(rng)

    m_bytes = m.encode(params.pseudonym_bytes)
    P_V = params.oracles.h1(ltp_target)
    Y = r * suite.P1 - h * P_V
    Z = r * params.U1

    query = Y.to_bytes() + m_bytes
    if table.queried(OracleId.H3, query):
        raise _abort(table, query, "H3 already answered the simulated (Y, m)")
    table.program(OracleId.H3, query, h)

    x_prime = _rsu_trapdoor(table, params, id_r)
    omega = suite.pair(Y, x_prime * params.U2)
    y = xor_bytes(params.oracles.h5(omega, params.l2_bits), Z.to_bytes() + m_bytes)
    envelope = SigncryptedEnvelope(Y, y)
    table.record("signcrypt", m_bytes + id_r, envelope.to_bytes())
    return envelope


def _key_point_trapdoors(table: OracleTable, params: SystemParams, stp: bytes) -> Tuple[KeyPointTrapdoor, KeyPointTrapdoor]:
    key_points(params, stp)
    q0, q1 = key_point_queries(stp)
    t0, t1 = table.trapdoor(OracleId.H1, q0), table.trapdoor(OracleId.H1, q1)
    if not isinstance(t0, KeyPointTrapdoor) or not isinstance(t1, KeyPointTrapdoor):
        raise _abort(table, stp, "no key-point trapdoor for the STP")
    return t0, t1


def _common_string_trapdoor(table: OracleTable, params: SystemParams, cs: CommonString) -> CommonStringTrapdoor:
    params.oracles.h2(cs.cs)
    trapdoor = table.trapdoor(OracleId.H2, cs.cs)
    if not isinstance(trapdoor, CommonStringTrapdoor):
        raise _abort(table, cs.cs, "no trapdoor for the common string")
    return trapdoor


def simulate_sign_without_key(
    table: OracleTable,
    params: SystemParams,
    m: bytes,
    stp: bytes,
    cs: CommonString,
    rng: random.Random,
    r: Optional[Scalar] = None
) -> SignedBeacon:
    """
    Sign a beacon from trapdoors alone.

    With H1(STP||j) = alpha_j*P1 + alpha'_j*U1 and H2(CS) = beta*P2
    (designated) or beta*U2, and c = H3(m, STP, CS):

        alpha' = 0 (honest form):         S2 = rP1, S1 = r*psi(P_CS) + (alpha_0 + c*alpha_1)U1
        target, CS not designated:        S2 = rP1 - beta^-1 (P0 + c*P1pt), S1 = r*psi(P_CS)
        target, designated, alpha'_0 + c*alpha'_1 = 0:
                                          S2 = rP1, S1 = beta*S2 + (alpha_0 + c*alpha_1)U1
        target, designated, otherwise:    abort

    Raises:
        SimulationAbort: the last case, or missing trapdoors.
    """
    suite = params.suite
    t0, t1 = _key_point_trapdoors(table, params, stp)
    cs_trapdoor = _common_string_trapdoor(table, params, cs)
    c = beacon_challenge(params, m, stp, cs)
    r = suite.scalar(r) if r is not None else suite.random_scalar(rng)
    beta = cs_trapdoor.beta
    P_cs = params.oracles.h2(cs.cs)
    honest_part = (t0.alpha + c * t1.alpha) * params.U1

    target = not (t0.alpha_prime.is_zero() and t1.alpha_prime.is_zero())
    if not target:
        S2 = r * suite.P1
        S1 = r * suite.psi(P_cs) + honest_part
    elif not cs_trapdoor.designated:
        P0, P1pt = key_points(params, stp)
        S2 = r * suite.P1 - beta.inverse() * (P0 + c * P1pt)
        S1 = r * suite.psi(P_cs)
    elif (t0.alpha_prime + c * t1.alpha_prime).is_zero():
        S2 = r * suite.P1
        S1 = beta * S2 + honest_part
    else:
        raise _abort(table, beacon_challenge_query(m, stp, cs.cs), "target STP signing under the designated string")

    beacon = SignedBeacon(m, stp, S1, S2)
    table.record("sign", beacon_challenge_query(m, stp, cs.cs), beacon.to_bytes())
    return beacon


class _SigncryptionChallenger:
    """
    Shared machinery of the signcryption reductions: L1/L2 bookkeeping, key
    extraction (Q4), de-signcryption by table lookups (Q2) and the channel
    oracle (Q3).
    """

    def __init__(
        self,
        suite: BilinearSuite,
        U2: G2Element,
        rng: random.Random,
        l1_bits: int = DEFAULT_L1_BITS,
        cipher: str = DEFAULT_CIPHER
    ):
        self.suite = suite
        self.rng = rng
        self.table = OracleTable(suite, rng)
        self.params = public_params(suite, U2, l1_bits=l1_bits, cipher=cipher, oracles=self.table)
        self.ledger = QueryLedger()
        self._h1_count = 0
        self._h2_count = 0
        self.table.set_handler(OracleId.H1, self._answer_h1)
        self.table.set_handler(OracleId.H2, self._answer_h2)

    # H1 / H2 defaults: known exponents

    def _exponent_h1(self) -> OracleEntry:
        x = self.suite.random_scalar(self.rng)
        return OracleEntry(x * self.suite.P1, ExponentTrapdoor(x, self.rng.randbytes(CHANNEL_KEY_BYTES)))

    def _exponent_h2(self) -> OracleEntry:
        x = self.suite.random_scalar(self.rng)
        return OracleEntry(x * self.suite.P2, ExponentTrapdoor(x))

    def _answer_h1(self, query: bytes) -> OracleEntry:
        self._h1_count += 1
        return self._exponent_h1()

    def _answer_h2(self, query: bytes) -> OracleEntry:
        self._h2_count += 1
        return self._exponent_h2()

    def _vehicle_trapdoor(self, ltp: bytes) -> ExponentTrapdoor:
        self.params.oracles.h1(ltp)
        return self.table.trapdoor(OracleId.H1, ltp)

    def rsu_key(self, id_r: bytes) -> Optional[G2Element]:
        """B = x'*U2, or None for the embedded target."""
        self.params.oracles.h2(id_r)
        trapdoor = self.table.trapdoor(OracleId.H2, id_r)
        if not isinstance(trapdoor, ExponentTrapdoor):
            raise _abort(self.table, id_r, "identity was hashed without a trapdoor")
        if trapdoor.x is None:
            return None
        return trapdoor.x * self.params.U2

    # Q4

    def extract_vehicle(self, ltp: bytes) -> LongTermCredential:
        trapdoor = self._vehicle_trapdoor(ltp)
        if trapdoor.x is None:
            raise _abort(self.table, ltp, "key extraction for the target LTP")
        self.ledger.note_extract(ltp)
        P_V = self.params.oracles.h1(ltp)
        self.table.record("extract", ltp, trapdoor.x * self.params.U1, True)
        return LongTermCredential(ltp, P_V, trapdoor.x * self.params.U1)

    def extract_rsu(self, id_r: bytes) -> RsuCredential:
        B = self.rsu_key(id_r)
        if B is None:
            raise _abort(self.table, id_r, "key extraction for the target RSU")
        self.ledger.note_extract(id_r)
        self.table.record("extract", id_r, B, True)
        return RsuCredential(id_r, self.params.oracles.h2(id_r), B)

    # Q2

    def _unmask(self, env: SigncryptedEnvelope, mask: bytes) -> Optional[Tuple[G1Element, RequestPlaintext]]:
        width = self.suite.element_width(Group.G1)
        if len(env.y) != self.params.l2_bytes:
            return None
        plain = xor_bytes(env.y, mask)
        try:
            Z = self.suite.g1_from_bytes(plain[:width])
            m = RequestPlaintext.decode(plain[width:], self.params.pseudonym_bytes)
        except EncodingError:
            return None
        return Z, m

    def _plaintext_aware(self, env: SigncryptedEnvelope, Z: G1Element, m: RequestPlaintext) -> bool:
        """LTP hashed before, H3 asked at (Y, m), and the verification equation holds."""
        if not self.table.queried(OracleId.H1, m.ltp):
            return False
        if not self.table.queried(OracleId.H3, env.Y.to_bytes() + m.encode(self.params.pseudonym_bytes)):
            return False
        return verify_inner(self.params, m, InnerSignature(env.Y, Z))

    def _designcrypt_known_key(self, env: SigncryptedEnvelope, B: G2Element) -> Optional[Tuple[RequestPlaintext, InnerSignature]]:
        omega = self.suite.pair(env.Y, B)
        entry = self.table.lookup(OracleId.H5, omega.to_bytes())
        if entry is None:
            return None
        opened = self._unmask(env, entry.answer)
        if opened is None:
            return None
        Z, m = opened
        if not self._plaintext_aware(env, Z, m):
            return None
        return m, InnerSignature(env.Y, Z)

    def designcrypt(self, env: SigncryptedEnvelope, id_r: bytes) -> Optional[Tuple[RequestPlaintext, InnerSignature]]:
        """Q2: answer from the tables alone; None plays the role of the reject symbol."""
        B = self.rsu_key(id_r)
        result = self._designcrypt_known_key(env, B) if B is not None else self._designcrypt_target(env)
        self.table.record("designcrypt", env.to_bytes() + id_r, None if result is None else result[0].encode(self.params.pseudonym_bytes))
        return result

    def _designcrypt_target(self, env: SigncryptedEnvelope) -> Optional[Tuple[RequestPlaintext, InnerSignature]]:
        raise _abort(self.table, env.to_bytes(), "de-signcryption at the target RSU is not simulated")

    # Q3

    def channel_encrypt(self, ltp: bytes, plaintext: bytes) -> bytes:
        k = self._vehicle_trapdoor(ltp).k
        return get_cipher(self.params.cipher).encrypt(k, plaintext, ltp, self.rng)

    def channel_decrypt(self, ltp: bytes, ciphertext: bytes) -> bytes:
        k = self._vehicle_trapdoor(ltp).k
        return get_cipher(self.params.cipher).decrypt(k, ciphertext, ltp)


class CdhSigncryptionSimulator(_SigncryptionChallenger):
    """
    Unforgeability challenger for the signcryption.

    The `target_index`-th distinct H1 query is answered psi(aP2) and its LTK
    (abP1) is never computed; every other LTP gets x*P1. A forgery on the
    target, forked on its H3 answer, yields abP1.
    """

    def __init__(
        self,
        suite: BilinearSuite,
        aP2: G2Element,
        bP2: G2Element,
        rng: random.Random,
        target_index: int = 1,
        **kwargs
    ):
        if target_index < 1:
            raise ValueError(f"target_index counts from 1, got {target_index}")
        self.aP2 = aP2
        self.target_index = target_index
        self.target_ltp: Optional[bytes] = None
        super().__init__(suite, bP2, rng, **kwargs)

    def _answer_h1(self, query: bytes) -> OracleEntry:
        self._h1_count += 1
        if self._h1_count != self.target_index:
            return self._exponent_h1()
        self.target_ltp = bytes(query)
        k = self.rng.randbytes(CHANNEL_KEY_BYTES)
        return OracleEntry(self.suite.psi(self.aP2), ExponentTrapdoor(None, k))

    def signcrypt(self, m: RequestPlaintext, id_r: bytes) -> SigncryptedEnvelope:
        """Q1: honest for ordinary senders, keyless for the target."""
        trapdoor = self._vehicle_trapdoor(m.ltp)
        self.ledger.note_signcrypt(m.encode(self.params.pseudonym_bytes), id_r)
        if trapdoor.x is None:
            return simulate_signcrypt_without_key(self.table, self.params, m, m.ltp, id_r, self.rng)
        P_V = self.params.oracles.h1(m.ltp)
        cred = LongTermCredential(m.ltp, P_V, trapdoor.x * self.params.U1)
        envelope = signcrypt(self.params, cred, m, id_r, self.rng)
        self.table.record("signcrypt", m.encode(self.params.pseudonym_bytes) + id_r, envelope.to_bytes())
        return envelope


class BdhConfidentialitySimulator(_SigncryptionChallenger):
    """
    Confidentiality challenger for the signcryption.

    The `target_index`-th distinct H2 query (an RSU identity) is answered aP2,
    so its B = abP2 stays unknown; every LTP gets x*P1 with LTK = x*U1. Q2 at
    the target RSU walks L5 and accepts a candidate w only when
    w = e(Z - h*LTK, aP2). The challenge ciphertext is Y* = cP1 with a random
    mask, and `final_guess` derives a GT element from a random L5 entry.
    """

    def __init__(
        self,
        suite: BilinearSuite,
        aP2: G2Element,
        bP2: G2Element,
        cP1: G1Element,
        rng: random.Random,
        target_index: int = 1,
        **kwargs
    ):
        if target_index < 1:
            raise ValueError(f"target_index counts from 1, got {target_index}")
        self.aP2 = aP2
        self.cP1 = cP1
        self.target_index = target_index
        self.target_id_r: Optional[bytes] = None
        self.challenge_ltp: Optional[bytes] = None
        self.guess: Optional[GtElement] = None
        super().__init__(suite, bP2, rng, **kwargs)

    def _answer_h2(self, query: bytes) -> OracleEntry:
        self._h2_count += 1
        if self._h2_count != self.target_index:
            return self._exponent_h2()
        self.target_id_r = bytes(query)
        return OracleEntry(self.aP2, ExponentTrapdoor(None))

    def signcrypt(self, m: RequestPlaintext, id_r: bytes) -> SigncryptedEnvelope:
        """Q1: every sender's LTK is known, so this is the honest algorithm."""
        cred = self.extract_vehicle_silently(m.ltp)
        self.ledger.note_signcrypt(m.encode(self.params.pseudonym_bytes), id_r)
        self.params.oracles.h2(id_r)
        envelope = signcrypt(self.params, cred, m, id_r, self.rng)
        self.table.record("signcrypt", m.encode(self.params.pseudonym_bytes) + id_r, envelope.to_bytes())
        return envelope

    def extract_vehicle_silently(self, ltp: bytes) -> LongTermCredential:
        trapdoor = self._vehicle_trapdoor(ltp)
        return LongTermCredential(ltp, self.params.oracles.h1(ltp), trapdoor.x * self.params.U1)

    def _designcrypt_target(self, env: SigncryptedEnvelope) -> Optional[Tuple[RequestPlaintext, InnerSignature]]:
        for w_bytes, entry in self.table.entries(OracleId.H5):
            opened = self._unmask(env, entry.answer)
            if opened is None:
                continue
            Z, m = opened
            if not self.table.queried(OracleId.H1, m.ltp):
                continue
            m_bytes = m.encode(self.params.pseudonym_bytes)
            h_entry = self.table.lookup(OracleId.H3, env.Y.to_bytes() + m_bytes)
            if h_entry is None:
                continue
            LTK = self.extract_vehicle_silently(m.ltp).LTK
            if self.suite.pair(Z - h_entry.answer * LTK, self.aP2).to_bytes() != w_bytes:
                continue
            if verify_inner(self.params, m, InnerSignature(env.Y, Z)):
                return m, InnerSignature(env.Y, Z)
        return None

    def challenge(self, id_r: bytes, m0: RequestPlaintext, m1: RequestPlaintext) -> SigncryptedEnvelope:
        """
        Response stage: (Y*, y*) = (cP1, random l2 bits) at the target RSU.

        Raises:
            SimulationAbort: the adversary picked another RSU.
            CredentialError: the two messages carry different LTPs.
        """
        if m0.ltp != m1.ltp:
            raise CredentialError("Challenge messages must share one LTP")
        self.params.oracles.h2(id_r)
        if id_r != self.target_id_r:
            raise _abort(self.table, id_r, "challenge RSU is not the embedded target")
        self.params.oracles.h1(m0.ltp)
        self.challenge_ltp = m0.ltp
        y = bytearray(self.rng.randbytes(self.params.l2_bytes))
        spare = 8 * self.params.l2_bytes - self.params.l2_bits
        if spare:
            y[-1] &= (0xFF << spare) & 0xFF
        envelope = SigncryptedEnvelope(self.cP1, bytes(y))
        self.table.record("challenge", id_r, envelope.to_bytes())
        return envelope

    def final_guess(self) -> Optional[GtElement]:
        """w*^(x*^-1) for a uniformly chosen L5 entry w*; recorded, not checked."""
        candidates: List[bytes] = [w for w, _ in self.table.entries(OracleId.H5)]
        if not candidates or self.challenge_ltp is None:
            return None
        x_star = self._vehicle_trapdoor(self.challenge_ltp).x
        w_star = self.suite.gt_from_bytes(candidates[self.rng.randrange(len(candidates))])
        self.guess = w_star ** x_star.inverse()
        self.table.record("guess", w_star.to_bytes(), self.guess)
        return self.guess


@dataclass
class _StpTuple:
    stp: bytes
    P0: G1Element
    P1pt: G1Element
    t0: KeyPointTrapdoor
    t1: KeyPointTrapdoor

    @property
    def is_target(self) -> bool:
        return not (self.t0.alpha_prime.is_zero() and self.t1.alpha_prime.is_zero())


class CdhAggregateSimulator:
    """
    Beacon unforgeability challenger.

    H1(STP||j): the `target_index`-th distinct STP gets
        P_j = alpha_j*P1 + alpha'_j*U1, every other STP P_j = alpha_j*P1.
    H2(CS): the `designated_index`-th distinct string gets beta*P2, every
        other beta*U2.
    H3(m, STP, CS): for the target STP under the designated string the
        `challenge_index`-th such query is programmed to -alpha'_0/alpha'_1
        (the only value the target may sign under that string), the rest are random.
    Q5 aborts on the target, Q6 signs from trapdoors, Q7 traces with lambda.
    """

    def __init__(
        self,
        suite: BilinearSuite,
        bP2: G2Element,
        rng: random.Random,
        target_index: int = 1,
        designated_index: int = 1,
        challenge_index: int = 1,
        l1_bits: int = DEFAULT_L1_BITS,
        cipher: str = DEFAULT_CIPHER
    ):
        for name, value in (("target_index", target_index), ("designated_index", designated_index),
                            ("challenge_index", challenge_index)):
            if value < 1:
                raise ValueError(f"{name} counts from 1, got {value}")
        self.suite = suite
        self.rng = rng
        self.table = OracleTable(suite, rng)
        self.params = public_params(suite, bP2, l1_bits=l1_bits, cipher=cipher, oracles=self.table)
        self.ledger = QueryLedger()
        self.kgc = KgcState(self.params, None, rng)
        self.target_index = target_index
        self.designated_index = designated_index
        self.challenge_index = challenge_index
        self.target_stp: Optional[bytes] = None
        self.designated_cs: Optional[bytes] = None
        self._stps: Dict[bytes, _StpTuple] = {}
        self._cs_count = 0
        self._challenge_count = 0
        self.table.set_handler(OracleId.H1, self._answer_h1)
        self.table.set_handler(OracleId.H2, self._answer_h2)
        self.table.set_handler(OracleId.H3, self._answer_h3)

    # Pseudonyms

    def issue_stp(self, rid: bytes, validity: Validity = Validity(0, 0)) -> bytes:
        """A real short-term pseudonym for `rid`, traceable through Q7."""
        if rid not in self.kgc.registrations:
            self.kgc.enroll(rid)
        return self.kgc.issue_pseudonym(rid, PseudonymKind.SHORT_TERM, validity).pseudonym

    # Oracles

    def _stp_tuple(self, stp: bytes) -> _StpTuple:
        known = self._stps.get(stp)
        if known is not None:
            return known
        U1, P1 = self.params.U1, self.suite.P1
        target = len(self._stps) + 1 == self.target_index
        zero = self.suite.scalar(0)

        def draw() -> KeyPointTrapdoor:
            alpha = self.suite.random_scalar(self.rng)
            alpha_prime = self.suite.random_scalar(self.rng) if target else zero
            return KeyPointTrapdoor(alpha, alpha_prime)

        t0, t1 = draw(), draw()
        entry = _StpTuple(stp, t0.alpha * P1 + t0.alpha_prime * U1, t1.alpha * P1 + t1.alpha_prime * U1, t0, t1)
        self._stps[stp] = entry
        if target:
            self.target_stp = stp
        return entry

    def _answer_h1(self, query: bytes) -> OracleEntry:
        stp, j = query[:-1], query[-1:]
        if j not in (b"\x00", b"\x01"):
            return OracleEntry(self.suite.random_g1(self.rng))
        entry = self._stp_tuple(stp)
        q0, q1 = key_point_queries(stp)
        for q, point, trapdoor in ((q0, entry.P0, entry.t0), (q1, entry.P1pt, entry.t1)):
            if q != query and not self.table.queried(OracleId.H1, q):
                self.table.program(OracleId.H1, q, point, trapdoor)
        if j == b"\x00":
            return OracleEntry(entry.P0, entry.t0)
        return OracleEntry(entry.P1pt, entry.t1)

    def _answer_h2(self, query: bytes) -> OracleEntry:
        self._cs_count += 1
        beta = self.suite.random_scalar(self.rng)
        if self._cs_count == self.designated_index:
            self.designated_cs = bytes(query)
            return OracleEntry(beta * self.suite.P2, CommonStringTrapdoor(beta, True))
        return OracleEntry(beta * self.params.U2, CommonStringTrapdoor(beta, False))

    def _parse_h3(self, query: bytes) -> Optional[Tuple[bytes, bytes]]:
        try:
            m_len, offset = unpack_u32(query, 0)
            _, offset = take(query, offset, m_len)
            stp, offset = take(query, offset, self.params.pseudonym_bytes)
        except ValueError:
            return None
        return stp, query[offset:]

    def _answer_h3(self, query: bytes) -> OracleEntry:
        parsed = self._parse_h3(query)
        if parsed is None:
            return OracleEntry(self.suite.random_scalar(self.rng))
        stp, cs = parsed
        self.params.oracles.h1(key_point_queries(stp)[0])
        entry = self._stps[stp]
        self.params.oracles.h2(cs)
        if entry.is_target and cs == self.designated_cs:
            self._challenge_count += 1
            if self._challenge_count == self.challenge_index:
                c = -entry.t0.alpha_prime * entry.t1.alpha_prime.inverse()
                return OracleEntry(c, True)
        return OracleEntry(self.suite.random_scalar(self.rng))

    # Q5 / Q6 / Q7

    def extract_short_term(self, stp: bytes) -> ShortTermCredential:
        self.params.oracles.h1(key_point_queries(stp)[0])
        entry = self._stps[stp]
        if entry.is_target:
            raise _abort(self.table, stp, "key extraction for the target STP")
        self.ledger.note_extract(stp)
        U1 = self.params.U1
        cred = ShortTermCredential(stp, entry.P0, entry.P1pt, entry.t0.alpha * U1, entry.t1.alpha * U1)
        self.table.record("extract", stp, cred.D0.to_bytes() + cred.D1.to_bytes(), True)
        return cred

    def sign(self, cs: CommonString, m: bytes, stp: bytes) -> SignedBeacon:
        self.ledger.note_sign(m, stp)
        return simulate_sign_without_key(self.table, self.params, m, stp, cs, self.rng)

    def trace(self, stp: bytes) -> Optional[bytes]:
        self.ledger.note_trace(stp)
        rid = self.kgc.trace(stp, strict=False)
        self.table.record("trace", stp, rid)
        return rid

    def key_point_trapdoors(self, stp: bytes) -> Tuple[KeyPointTrapdoor, KeyPointTrapdoor]:
        if stp not in self._stps:
            raise ExtractionError("STP was never hashed")
        entry = self._stps[stp]
        return entry.t0, entry.t1
