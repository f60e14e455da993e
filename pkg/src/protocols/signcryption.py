"""
Identity-Based Signcryption (STP and STK distribution)
======================================================

KGC setup, long-term key extraction for vehicles and RSUs, and the
Request-phase signcryption carrying m = (n, LTP, tau) from a vehicle to an RSU.

    signcrypt:    Y = r*P_V, h = H3(Y||m), Z = (r+h)*LTK,
                  w = e(r*LTK, H2(ID_R)), y = H5(w) XOR (Z||m)
    designcrypt:  w = e(Y, B), Z||m = y XOR H5(w),
                  accept iff e(Z, P2) = e(Y + h*P_V, U2)

Wire format of an envelope: encode(Y) || y, where |y| = l2 bits and
l2 = 8 * (|encode(Z)| + |encode(m)|). The request encodes as
n (8 bytes) || LTP (l1/8 bytes) || tau (8 bytes), all big-endian.
"""
import random
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

from src.errors import (
    BackendUnavailableError,
    CredentialError,
    EncodingError,
    RejectReason,
    SigncryptionRejected,
)
from src.pairing import BackendId, BilinearSuite, G1Element, G2Element, Group, HashOracles, Scalar, make_suite
from src.utils.helpers import take, xor_bytes
from src.utils.logger import get_logger
from settings import (
    DEFAULT_CIPHER,
    DEFAULT_L1_BITS,
    DEFAULT_L3_BITS,
    KGC_IDENTITY,
    NONCE_BYTES,
    TIMESTAMP_BYTES,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class SystemParams:
    """Public parameters: the suite, master public points, bit lengths and oracles."""
    suite: BilinearSuite
    U1: G1Element
    U2: G2Element
    l1_bits: int
    l2_bits: int
    l3_bits: int
    kgc_id: bytes
    P_kgc: G2Element
    cipher: str
    oracles: HashOracles = field(compare=False)

    @property
    def pseudonym_bytes(self) -> int:
        return self.l1_bits // 8

    @property
    def request_bytes(self) -> int:
        return NONCE_BYTES + self.pseudonym_bytes + TIMESTAMP_BYTES

    @property
    def l2_bytes(self) -> int:
        return (self.l2_bits + 7) // 8

    def with_oracles(self, oracles: HashOracles) -> "SystemParams":
        return replace(self, oracles=oracles)


@dataclass(frozen=True)
class MasterSecret:
    s: Scalar = field(repr=False)


@dataclass(frozen=True)
class LongTermCredential:
    ltp: bytes
    P_V: G1Element
    LTK: G1Element = field(repr=False)


@dataclass(frozen=True)
class RsuCredential:
    id_r: bytes
    P_R: G2Element
    B: G2Element = field(repr=False)


@dataclass(frozen=True)
class RequestPlaintext:
    n: int
    ltp: bytes
    tau: int

    def encode(self, pseudonym_bytes: int) -> bytes:
        if len(self.ltp) != pseudonym_bytes:
            raise CredentialError(f"LTP must be {pseudonym_bytes} bytes, got {len(self.ltp)}")
        return (
            self.n.to_bytes(NONCE_BYTES, "big")
            + self.ltp
            + self.tau.to_bytes(TIMESTAMP_BYTES, "big")
        )

    @classmethod
    def decode(cls, data: bytes, pseudonym_bytes: int) -> "RequestPlaintext":
        expected = NONCE_BYTES + pseudonym_bytes + TIMESTAMP_BYTES
        if len(data) != expected:
            raise EncodingError(f"Request plaintext needs {expected} bytes, got {len(data)}")
        n_bytes, offset = take(data, 0, NONCE_BYTES)
        ltp, offset = take(data, offset, pseudonym_bytes)
        tau_bytes, _ = take(data, offset, TIMESTAMP_BYTES)
        return cls(int.from_bytes(n_bytes, "big"), ltp, int.from_bytes(tau_bytes, "big"))


@dataclass(frozen=True)
class SigncryptedEnvelope:
    Y: G1Element
    y: bytes

    def to_bytes(self) -> bytes:
        return self.Y.to_bytes() + self.y

    @classmethod
    def from_bytes(cls, params: SystemParams, data: bytes) -> "SigncryptedEnvelope":
        width = params.suite.element_width(Group.G1)
        if len(data) != width + params.l2_bytes:
            raise SigncryptionRejected(
                RejectReason.LENGTH,
                f"envelope needs {width + params.l2_bytes} bytes, got {len(data)}"
            )
        try:
            Y = params.suite.g1_from_bytes(data[:width])
        except EncodingError as e:
            raise SigncryptionRejected(RejectReason.PARSE, str(e)) from e
        return cls(Y, bytes(data[width:]))


@dataclass(frozen=True)
class InnerSignature:
    Y: G1Element
    Z: G1Element


def setup(
    security_param: int,
    backend: Union[str, BackendId],
    rng: Optional[random.Random] = None,
    master_key: Optional[int] = None,
    hash_seed: bytes = b"",
    l1_bits: int = DEFAULT_L1_BITS,
    l3_bits: int = DEFAULT_L3_BITS,
    cipher: str = DEFAULT_CIPHER,
    toy_modulus: Optional[int] = None
) -> Tuple[SystemParams, MasterSecret]:
    """
    Generate the public parameters and the KGC master secret.

    Args:
        security_param: Requested security level in bits. The external backend
            refuses levels above what its curve provides; the toy backend accepts
            anything and logs that it is insecure.
        backend: "toy" or "external".
        rng: Randomness source for s. Defaults to the system CSPRNG.
        master_key: Fixes s (fixtures only).
        hash_seed: Per-deployment hash separation string.
        l1_bits: Pseudonym length. Must be a multiple of 8 and at least 128.
        l3_bits: Exposed for completeness; unused by the protocols.
        cipher: Name of the symmetric AEAD for Reply/Update payloads.
        toy_modulus: Overrides the toy group order.

    Returns:
        (SystemParams, MasterSecret)
    """
    if security_param <= 0:
        raise ValueError(f"Security parameter must be positive, got {security_param}")
    if l1_bits % 8 or l1_bits < 128:
        raise ValueError(f"l1 must be a multiple of 8 and at least 128 bits, got {l1_bits}")

    suite = make_suite(backend, hash_seed=hash_seed, toy_modulus=toy_modulus)
    if suite.backend_id is BackendId.TOY:
        logger.warning("Using the toy backend (q=%d): transparent groups, no security.", suite.q)
    elif security_param > suite.security_level:
        raise BackendUnavailableError(
            f"Backend {suite.backend_id.value} provides {suite.security_level} bits, "
            f"{security_param} requested"
        )

    rng = rng or random.SystemRandom()
    s = suite.scalar(master_key) if master_key is not None else suite.random_scalar(rng)
    if s.is_zero():
        raise ValueError("The master key must be nonzero")

    params = public_params(suite, s * suite.P2, l1_bits=l1_bits, l3_bits=l3_bits, cipher=cipher)
    logger.info(
        "System setup complete on the %s backend (l1=%d, l2=%d bits).",
        suite.backend_id.value, l1_bits, params.l2_bits
    )
    return params, MasterSecret(s)


def public_params(
    suite: BilinearSuite,
    U2: G2Element,
    l1_bits: int = DEFAULT_L1_BITS,
    l3_bits: int = DEFAULT_L3_BITS,
    cipher: str = DEFAULT_CIPHER,
    oracles: Optional[HashOracles] = None
) -> SystemParams:
    """
    Assemble SystemParams around a given master public point U2.

    Reduction simulators use this to embed a problem instance as U2 without
    ever knowing s.
    """
    if l1_bits % 8 or l1_bits < 128:
        raise ValueError(f"l1 must be a multiple of 8 and at least 128 bits, got {l1_bits}")
    oracles = oracles or HashOracles(suite)
    request_bytes = NONCE_BYTES + l1_bits // 8 + TIMESTAMP_BYTES
    return SystemParams(
        suite=suite,
        U1=suite.psi(U2),
        U2=U2,
        l1_bits=l1_bits,
        l2_bits=8 * (suite.element_width(Group.G1) + request_bytes),
        l3_bits=l3_bits,
        kgc_id=KGC_IDENTITY,
        P_kgc=oracles.h2(KGC_IDENTITY),
        cipher=cipher,
        oracles=oracles,
    )


def _check_pseudonym(params: SystemParams, pseudonym: bytes, label: str) -> None:
    if len(pseudonym) != params.pseudonym_bytes:
        raise CredentialError(
            f"{label} must be {params.pseudonym_bytes} bytes ({params.l1_bits} bits), got {len(pseudonym)}"
        )


def extract_vehicle_key(params: SystemParams, master: MasterSecret, ltp: bytes) -> LongTermCredential:
    """LTK = s * H1(LTP)."""
    _check_pseudonym(params, ltp, "LTP")
    P_V = params.oracles.h1(ltp)
    return LongTermCredential(ltp, P_V, master.s * P_V)


def extract_rsu_key(params: SystemParams, master: MasterSecret, id_r: bytes) -> RsuCredential:
    """B = s * H2(ID_R)."""
    if not id_r:
        raise CredentialError("RSU identity must be nonempty")
    P_R = params.oracles.h2(id_r)
    return RsuCredential(id_r, P_R, master.s * P_R)


def signcryption_challenge(params: SystemParams, Y: G1Element, m_bytes: bytes) -> Scalar:
    """h = H3(Y || m)."""
    return params.oracles.h3(Y.to_bytes() + m_bytes)


def signcrypt(
    params: SystemParams,
    cred: LongTermCredential,
    m: RequestPlaintext,
    id_r: bytes,
    rng: random.Random,
    r: Optional[Scalar] = None
) -> SigncryptedEnvelope:
    """
    Signcrypt a request for the RSU identified by id_r.

    Args:
        params: System parameters.
        cred: The sender's long-term credential; must match m.ltp.
        m: Request plaintext.
        id_r: Recipient RSU identity.
        rng: Randomness source for r.
        r: Fixes the nonce (test vectors only). Must be nonzero.

    Returns:
        SigncryptedEnvelope (Y, y).
    """
    if m.ltp != cred.ltp:
        raise CredentialError("Request LTP does not match the signing credential")
    suite = params.suite
    if r is None:
        r = suite.random_scalar(rng)
    elif suite.scalar(r).is_zero():
        raise ValueError("r must be nonzero")
    r = suite.scalar(r)

    m_bytes = m.encode(params.pseudonym_bytes)
    Y = r * cred.P_V
    h = signcryption_challenge(params, Y, m_bytes)
    Z = (r + h) * cred.LTK
    omega = suite.pair(r * cred.LTK, params.oracles.h2(id_r))
    y = xor_bytes(params.oracles.h5(omega, params.l2_bits), Z.to_bytes() + m_bytes)
    return SigncryptedEnvelope(Y, y)


def verify_inner(params: SystemParams, m: RequestPlaintext, sig: InnerSignature) -> bool:
    """Check e(Z, P2) = e(Y + h*P_V, U2) with P_V = H1(m.LTP) and h = H3(Y||m)."""
    try:
        m_bytes = m.encode(params.pseudonym_bytes)
    except CredentialError:
        return False
    P_V = params.oracles.h1(m.ltp)
    h = signcryption_challenge(params, sig.Y, m_bytes)
    suite = params.suite
    return suite.pair(sig.Z, suite.P2) == suite.pair(sig.Y + h * P_V, params.U2)


def designcrypt(
    params: SystemParams,
    rsu: RsuCredential,
    env: SigncryptedEnvelope
) -> Tuple[RequestPlaintext, InnerSignature]:
    """
    Recover and verify a signcrypted request.

    Raises:
        SigncryptionRejected: with reason LENGTH, PARSE or EQUATION.
    """
    suite = params.suite
    if len(env.y) != params.l2_bytes:
        raise SigncryptionRejected(
            RejectReason.LENGTH, f"y needs {params.l2_bytes} bytes, got {len(env.y)}"
        )

    omega = suite.pair(env.Y, rsu.B)
    plain = xor_bytes(env.y, params.oracles.h5(omega, params.l2_bits))
    width = suite.element_width(Group.G1)

    # A parse failure still runs the verification equation on placeholders so
    # the pairing work does not depend on where the envelope went wrong.
    failure: Optional[SigncryptionRejected] = None
    try:
        Z = suite.g1_from_bytes(plain[:width])
    except EncodingError as e:
        failure = SigncryptionRejected(RejectReason.PARSE, f"Z: {e}")
        Z = suite.g1_identity()
    try:
        m = RequestPlaintext.decode(plain[width:], params.pseudonym_bytes)
    except EncodingError as e:
        failure = failure or SigncryptionRejected(RejectReason.PARSE, f"m: {e}")
        m = RequestPlaintext(0, bytes(params.pseudonym_bytes), 0)

    sig = InnerSignature(env.Y, Z)
    valid = verify_inner(params, m, sig)
    if failure is not None:
        raise failure
    if not valid:
        raise SigncryptionRejected(RejectReason.EQUATION, "e(Z,P2) != e(Y+hP_V,U2)")
    return m, sig
