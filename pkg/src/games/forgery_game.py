"""
Forgery Games
=============

Honest challengers for the two unforgeability games and the adjudicator that
scores an adversary's output against the query ledger.

signcrypt_auth: the adversary may extract long-term keys of vehicles and
    RSUs, ask for signcryptions (Q1) and de-signcryptions (Q2). It wins with an
    envelope that passes Verify at some RSU, on an LTP whose key it never
    extracted, for an (m, ID_R) it never had signcrypted.

aggregate_auth: the adversary may extract short-term keys (Q5), ask for beacon
    signatures (Q6) and traces (Q7). It wins with a verifying aggregate
    containing an (m, STP) that was never signed for it, on an STP whose key
    it never extracted.

An output that verifies only because the adversary extracted the signer's key
is scored KEY_COMPROMISE: recorded as a win but not as a forgery.
"""
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, List, Optional, Tuple, Union

from src.errors import (
    BackendMismatchError,
    CommonStringReuseError,
    CredentialError,
    EncodingError,
    ProtocolViolation,
    SigncryptionRejected,
)
from src.games.oracle_table import OracleTable, QueryLedger
from src.models.records import ITranscriptRecord
from src.protocols.aggregate import (
    AggregateSignature,
    CommonString,
    CommonStringLedger,
    ShortTermCredential,
    SignedBeacon,
    extract_short_term_key,
    sign_beacon,
    verify_aggregate,
)
from src.protocols.pseudonyms import KgcState, PseudonymKind, Validity
from src.protocols.signcryption import (
    LongTermCredential,
    MasterSecret,
    RequestPlaintext,
    RsuCredential,
    SigncryptedEnvelope,
    SystemParams,
    designcrypt,
    extract_rsu_key,
    extract_vehicle_key,
    setup,
    signcrypt,
)
from src.utils.logger import get_logger
from settings import EXTERNAL_SECURITY_LEVEL, GAME_IDS, TOY_SECURITY_LEVEL

logger = get_logger(__name__)

GAME_VEHICLES = 3
GAME_RSUS = 2


class GameId(str, Enum):
    SIGNCRYPT_AUTH = GAME_IDS[0]
    AGGREGATE_AUTH = GAME_IDS[1]


class Verdict(str, Enum):
    FORGERY = "forgery"
    KEY_COMPROMISE = "key_compromise"
    REPLAYED = "replayed"
    INVALID = "invalid"
    DISQUALIFIED = "disqualified"


@dataclass
class GameResult:
    game_id: GameId
    verdict: Verdict
    transcript: List[ITranscriptRecord] = field(repr=False)
    ledger: QueryLedger = field(repr=False)
    detail: str = ""

    @property
    def won(self) -> bool:
        return self.verdict in (Verdict.FORGERY, Verdict.KEY_COMPROMISE)

    @property
    def forged(self) -> bool:
        return self.verdict is Verdict.FORGERY


class _Challenger:
    """Common state: params bound to a fresh oracle table, a KGC and the ledger."""

    def __init__(self, params: SystemParams, kgc: KgcState, rng: random.Random):
        self.table = OracleTable(params.suite, random.Random(rng.getrandbits(64)))
        self.params = params.with_oracles(self.table)
        self._kgc = kgc
        self._rng = rng
        self.ledger = QueryLedger()
        self._closed = False

    def _open_surface(self, name: str) -> None:
        if self._closed:
            raise ProtocolViolation(f"{name} queried after the response was submitted")

    def close(self) -> None:
        self._closed = True


class SigncryptionChallenger(_Challenger):
    """Query surface of signcrypt_auth. Public attributes: params, ltps, rsu_ids."""

    def __init__(self, params: SystemParams, kgc: KgcState, rng: random.Random, vehicles: int, rsus: int):
        super().__init__(params, kgc, rng)
        self._master = kgc.master
        self.ltps: List[bytes] = []
        for i in range(vehicles):
            _, channel_key = kgc.register_vehicle(f"GAME-RID-{i}".encode())
            self.ltps.append(channel_key.ltp)
        self.rsu_ids: List[bytes] = [f"RSU-{j}".encode() for j in range(rsus)]

    def _vehicle(self, ltp: bytes) -> LongTermCredential:
        if ltp not in self.ltps:
            raise ProtocolViolation("Unknown LTP")
        return extract_vehicle_key(self.params, self._master, ltp)

    def _rsu(self, id_r: bytes) -> RsuCredential:
        if id_r not in self.rsu_ids:
            raise ProtocolViolation("Unknown RSU identity")
        return extract_rsu_key(self.params, self._master, id_r)

    def extract_vehicle(self, ltp: bytes) -> LongTermCredential:
        self._open_surface("extract_vehicle")
        cred = self._vehicle(ltp)
        self.ledger.note_extract(ltp)
        self.table.record("extract", ltp, cred.LTK, True)
        return cred

    def extract_rsu(self, id_r: bytes) -> RsuCredential:
        self._open_surface("extract_rsu")
        cred = self._rsu(id_r)
        self.ledger.note_extract(id_r)
        self.table.record("extract", id_r, cred.B, True)
        return cred

    def signcrypt(self, m: RequestPlaintext, id_r: bytes) -> SigncryptedEnvelope:
        self._open_surface("signcrypt")
        cred = self._vehicle(m.ltp)
        self._rsu(id_r)
        envelope = signcrypt(self.params, cred, m, id_r, self._rng)
        m_bytes = m.encode(self.params.pseudonym_bytes)
        self.ledger.note_signcrypt(m_bytes, id_r)
        self.table.record("signcrypt", m_bytes + id_r, envelope.to_bytes())
        return envelope

    def designcrypt(self, env: SigncryptedEnvelope, id_r: bytes) -> Optional[RequestPlaintext]:
        self._open_surface("designcrypt")
        try:
            m, _ = designcrypt(self.params, self._rsu(id_r), env)
        except SigncryptionRejected:
            self.table.record("designcrypt", env.to_bytes() + id_r)
            return None
        self.table.record("designcrypt", env.to_bytes() + id_r, m.encode(self.params.pseudonym_bytes))
        return m

    def adjudicate(self, output: Any) -> Tuple[Verdict, str]:
        try:
            envelope, id_r = output
        except (TypeError, ValueError):
            return Verdict.DISQUALIFIED, "response must be (envelope, ID_R)"
        if id_r not in self.rsu_ids:
            return Verdict.DISQUALIFIED, "response names an unknown RSU"
        try:
            if isinstance(envelope, (bytes, bytearray)):
                envelope = SigncryptedEnvelope.from_bytes(self.params, bytes(envelope))
            if not isinstance(envelope, SigncryptedEnvelope):
                return Verdict.DISQUALIFIED, "response envelope has the wrong type"
            m, _ = designcrypt(self.params, self._rsu(id_r), envelope)
        except SigncryptionRejected as e:
            return Verdict.INVALID, e.reason.value
        except BackendMismatchError as e:
            return Verdict.INVALID, str(e)

        m_bytes = m.encode(self.params.pseudonym_bytes)
        if (m_bytes, id_r) in self.ledger.signcrypted:
            return Verdict.REPLAYED, "signcryption of (m, ID_R) was queried"
        if m.ltp in self.ledger.extracted:
            return Verdict.KEY_COMPROMISE, "the sender's long-term key was extracted"
        return Verdict.FORGERY, ""


class AggregateChallenger(_Challenger):
    """
    Query surface of aggregate_auth. Public attributes: params, stps,
    common_string. Every query shares one common string, and the signing
    oracle refuses a second signature by one STP under it.
    """

    def __init__(self, params: SystemParams, kgc: KgcState, rng: random.Random, vehicles: int, stps_per_vehicle: int = 2):
        super().__init__(params, kgc, rng)
        self._master = kgc.master
        self.common_string = CommonString(rng.randbytes(32), 0)
        self._cs_ledger = CommonStringLedger()
        self.stps: List[bytes] = []
        for i in range(vehicles):
            rid = f"GAME-RID-{i}".encode()
            kgc.enroll(rid)
            for _ in range(stps_per_vehicle):
                self.stps.append(kgc.issue_pseudonym(rid, PseudonymKind.SHORT_TERM, Validity(0, 0)).pseudonym)

    def _credential(self, stp: bytes) -> ShortTermCredential:
        if stp not in self.stps:
            raise ProtocolViolation("Unknown STP")
        return extract_short_term_key(self.params, self._master, stp)

    def extract_short_term(self, stp: bytes) -> ShortTermCredential:
        self._open_surface("extract_short_term")
        cred = self._credential(stp)
        self.ledger.note_extract(stp)
        self.table.record("extract", stp, cred.D0.to_bytes() + cred.D1.to_bytes(), True)
        return cred

    def sign(self, m: bytes, stp: bytes) -> SignedBeacon:
        self._open_surface("sign")
        cred = self._credential(stp)
        try:
            beacon = sign_beacon(self.params, cred, m, self.common_string, self._rng, ledger=self._cs_ledger)
        except CommonStringReuseError as e:
            raise ProtocolViolation(str(e)) from e
        self.ledger.note_sign(m, stp)
        self.table.record("sign", m + stp, beacon.to_bytes())
        return beacon

    def trace(self, stp: bytes) -> Optional[bytes]:
        self._open_surface("trace")
        self.ledger.note_trace(stp)
        rid = self._kgc.trace(stp, strict=False)
        self.table.record("trace", stp, rid)
        return rid

    def adjudicate(self, output: Any) -> Tuple[Verdict, str]:
        agg = output
        try:
            if isinstance(agg, (bytes, bytearray)):
                agg = AggregateSignature.from_bytes(self.params, bytes(agg))
        except EncodingError as e:
            return Verdict.INVALID, str(e)
        if not isinstance(agg, AggregateSignature):
            return Verdict.DISQUALIFIED, "response must be an aggregate signature"
        try:
            verified = verify_aggregate(self.params, agg, self.common_string)
        except BackendMismatchError as e:
            return Verdict.INVALID, str(e)
        if not verified:
            return Verdict.INVALID, "aggregate does not verify"

        fresh = [(m, stp) for m, stp in agg.entries if (m, stp) not in self.ledger.signed]
        if not fresh:
            return Verdict.REPLAYED, "every (m, STP) was signed by the oracle"
        if any(stp not in self.ledger.extracted for _, stp in fresh):
            return Verdict.FORGERY, ""
        return Verdict.KEY_COMPROMISE, "every fresh entry uses an extracted key"


Adversary = Callable[[Union[SigncryptionChallenger, AggregateChallenger]], Any]


def game_setup(rng: random.Random, backend: str = "toy") -> Tuple[SystemParams, MasterSecret]:
    """Initialize stage: fresh parameters and master secret for a batch of games."""
    security = TOY_SECURITY_LEVEL if backend == "toy" else EXTERNAL_SECURITY_LEVEL
    return setup(security, backend, rng=rng)


def make_challenger(
    game_id: Union[str, GameId],
    params: SystemParams,
    master: MasterSecret,
    rng: random.Random
) -> Union[SigncryptionChallenger, AggregateChallenger]:
    game_id = GameId(game_id)
    kgc = KgcState(params, master, rng)
    if game_id is GameId.SIGNCRYPT_AUTH:
        return SigncryptionChallenger(params, kgc, rng, GAME_VEHICLES, GAME_RSUS)
    return AggregateChallenger(params, kgc, rng, GAME_VEHICLES)


def run_forgery_game(
    game_id: Union[str, GameId],
    adversary: Adversary,
    rng: random.Random,
    params: Optional[SystemParams] = None,
    master: Optional[MasterSecret] = None
) -> GameResult:
    """
    Play one game: Initialize, let the adversary query, then judge its response.

    Args:
        game_id: signcrypt_auth or aggregate_auth.
        adversary: Callable receiving the challenger and returning its response:
            (envelope or its bytes, ID_R) for signcrypt_auth, an
            AggregateSignature or its bytes for aggregate_auth.
        rng: Seeds the challenger and its oracle table.
        params, master: Reused across games when given; otherwise a toy
            setup is drawn from rng.

    Returns:
        GameResult with the verdict, the ledger and the oracle transcript.
    """
    game_id = GameId(game_id)
    if params is None or master is None:
        params, master = game_setup(rng)
    challenger = make_challenger(game_id, params, master, rng)
    try:
        output = adversary(challenger)
    except (ProtocolViolation, CredentialError) as e:
        challenger.close()
        challenger.table.record("verdict", game_id.value.encode(), Verdict.DISQUALIFIED.value.encode())
        logger.warning("Adversary disqualified from %s: %s", game_id.value, e)
        return GameResult(game_id, Verdict.DISQUALIFIED, challenger.table.transcript, challenger.ledger, str(e))

    challenger.close()
    verdict, detail = challenger.adjudicate(output)
    challenger.table.record("verdict", game_id.value.encode(), verdict.value.encode())
    logger.debug("%s verdict: %s %s", game_id.value, verdict.value, detail)
    return GameResult(game_id, verdict, challenger.table.transcript, challenger.ledger, detail)
