"""
Programmable Random Oracles
===========================

`OracleTable` replaces the honest `HashOracles` inside `SystemParams` during a
security game. Every oracle keeps its own list (L1, L2, L3, L5) mapping query
bytes to an `OracleEntry`; the first answer for a query is final.

Answers come from, in order:
    1. an entry programmed with `program` / `program_oracle`
    2. a handler installed by a reduction simulator (e.g. H1 answers that
       embed a problem instance)
    3. a uniformly random fallback drawn from the table's own rng

Trapdoors (x_i, beta_i, alpha_ij, ...) ride along with the entry and are only
reachable through `trapdoor()`, which the honest algorithms never call.
"""
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional, Set, Tuple

from src.errors import OracleProgrammingError
from src.models.records import ITranscriptRecord
from src.pairing import BilinearSuite, G1Element, G2Element, GtElement, HashOracles, Scalar
from src.pairing.elements import GroupElement
from src.utils.helpers import digest_hex
from src.utils.writer import render_jsonl


class OracleId(str, Enum):
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"
    H5 = "h5"


@dataclass(frozen=True)
class OracleEntry:
    answer: Any
    trapdoor: Any = None


Handler = Callable[[bytes], OracleEntry]


# Trapdoor shapes used by the reduction simulators


@dataclass(frozen=True)
class ExponentTrapdoor:
    """H1(LTP) = x*P1 or H2(ID) = x*P2; `k` is the vehicle channel key when one was drawn."""
    x: Optional[Scalar]
    k: Optional[bytes] = None


@dataclass(frozen=True)
class KeyPointTrapdoor:
    """H1(STP||j) = alpha*P1 + alpha_prime*U1."""
    alpha: Scalar
    alpha_prime: Scalar


@dataclass(frozen=True)
class CommonStringTrapdoor:
    """H2(CS) = beta*P2 when designated, beta*U2 otherwise."""
    beta: Scalar
    designated: bool


def _answer_bytes(answer: Any) -> bytes:
    if isinstance(answer, GroupElement):
        return answer.to_bytes()
    if isinstance(answer, Scalar):
        return answer.value.to_bytes((answer.q.bit_length() + 7) // 8, "big")
    if isinstance(answer, (bytes, bytearray)):
        return bytes(answer)
    return repr(answer).encode("utf-8")


class OracleTable(HashOracles):
    """
    Random-oracle state shared by the honest algorithms and a game's simulator.

    One table belongs to one game; it is not thread-safe.
    """

    def __init__(self, suite: BilinearSuite, rng: random.Random):
        super().__init__(suite)
        self.rng = rng
        self._lists: Dict[OracleId, Dict[bytes, OracleEntry]] = {oid: {} for oid in OracleId}
        self._handlers: Dict[OracleId, Handler] = {}
        self.transcript: List[ITranscriptRecord] = []

    # Programming

    def set_handler(self, oracle_id: OracleId, handler: Optional[Handler]) -> None:
        if handler is None:
            self._handlers.pop(oracle_id, None)
        else:
            self._handlers[oracle_id] = handler

    def program(self, oracle_id: OracleId, query: bytes, answer: Any, trapdoor: Any = None) -> OracleEntry:
        query = bytes(query)
        if query in self._lists[oracle_id]:
            raise OracleProgrammingError(
                f"{oracle_id.value} already answers {digest_hex(query)}; entries are never overwritten"
            )
        entry = OracleEntry(answer, trapdoor)
        self._lists[oracle_id][query] = entry
        return entry

    # Inspection (simulator side)

    def lookup(self, oracle_id: OracleId, query: bytes) -> Optional[OracleEntry]:
        return self._lists[oracle_id].get(bytes(query))

    def queried(self, oracle_id: OracleId, query: bytes) -> bool:
        return bytes(query) in self._lists[oracle_id]

    def trapdoor(self, oracle_id: OracleId, query: bytes) -> Any:
        entry = self.lookup(oracle_id, query)
        return entry.trapdoor if entry is not None else None

    def entries(self, oracle_id: OracleId) -> Iterator[Tuple[bytes, OracleEntry]]:
        """Entries in the order they were first answered."""
        return iter(list(self._lists[oracle_id].items()))

    def __len__(self) -> int:
        return sum(len(entries) for entries in self._lists.values())

    # Answering

    def _fallback(self, oracle_id: OracleId) -> OracleEntry:
        if oracle_id is OracleId.H1:
            return OracleEntry(self.suite.random_g1(self.rng))
        if oracle_id is OracleId.H2:
            return OracleEntry(self.suite.random_g2(self.rng))
        return OracleEntry(self.suite.random_scalar(self.rng))

    def _answer(self, oracle_id: OracleId, query: bytes, make: Callable[[], OracleEntry]) -> Any:
        query = bytes(query)
        entry = self._lists[oracle_id].get(query)
        if entry is None:
            handler = self._handlers.get(oracle_id)
            entry = handler(query) if handler is not None else make()
            # A handler may have programmed the query itself while answering.
            entry = self._lists[oracle_id].setdefault(query, entry)
        self.record(oracle_id.value, query, entry.answer, entry.trapdoor is not None)
        return entry.answer

    def h1(self, query: bytes) -> G1Element:
        return self._answer(OracleId.H1, query, lambda: self._fallback(OracleId.H1))

    def h2(self, query: bytes) -> G2Element:
        return self._answer(OracleId.H2, query, lambda: self._fallback(OracleId.H2))

    def h3(self, query: bytes) -> Scalar:
        return self._answer(OracleId.H3, query, lambda: self._fallback(OracleId.H3))

    def h5(self, w: GtElement, out_len_bits: int) -> bytes:
        n_bytes = (out_len_bits + 7) // 8

        def draw() -> OracleEntry:
            mask = bytearray(self.rng.randbytes(n_bytes))
            spare = 8 * n_bytes - out_len_bits
            if spare:
                mask[-1] &= (0xFF << spare) & 0xFF
            return OracleEntry(bytes(mask))

        answer = self._answer(OracleId.H5, w.to_bytes(), draw)
        if len(answer) != n_bytes:
            raise OracleProgrammingError(
                f"h5 entry holds {len(answer)} bytes but {n_bytes} were requested"
            )
        return answer

    # Transcript

    def record(self, query: str, data: bytes, answer: Any = None, trapdoor: bool = False) -> ITranscriptRecord:
        """Append a transcript line; `answer=None` marks aborts and rejections."""
        record = ITranscriptRecord(
            query=query,
            input_digest=digest_hex(bytes(data)),
            answer_digest=None if answer is None else digest_hex(_answer_bytes(answer)),
            trapdoor=trapdoor,
        )
        self.transcript.append(record)
        return record

    def count(self, query: str) -> int:
        return sum(1 for record in self.transcript if record["query"] == query)

    def transcript_jsonl(self) -> str:
        return render_jsonl(self.transcript)


def program_oracle(
    table: OracleTable,
    oracle_id: OracleId,
    query: bytes,
    answer: Any,
    trapdoor: Any = None
) -> OracleTable:
    """Program one entry and return the table; raises OracleProgrammingError on reprogramming."""
    table.program(oracle_id, query, answer, trapdoor)
    return table


@dataclass
class QueryLedger:
    """
    What the adversary has asked for during a game. Append-only.

    extracted:    LTPs, STPs and RSU identities whose private keys were handed out
    signcrypted:  (encoded m, ID_R) pairs answered by the signcryption oracle
    signed:       (m, STP) pairs answered by the beacon signing oracle
    traced:       pseudonyms submitted for tracing
    """
    extracted: Set[bytes] = field(default_factory=set)
    signcrypted: Set[Tuple[bytes, bytes]] = field(default_factory=set)
    signed: Set[Tuple[bytes, bytes]] = field(default_factory=set)
    traced: Set[bytes] = field(default_factory=set)

    def note_extract(self, identity: bytes) -> None:
        self.extracted.add(bytes(identity))

    def note_signcrypt(self, m_bytes: bytes, id_r: bytes) -> None:
        self.signcrypted.add((bytes(m_bytes), bytes(id_r)))

    def note_sign(self, m: bytes, stp: bytes) -> None:
        self.signed.add((bytes(m), bytes(stp)))

    def note_trace(self, pseudonym: bytes) -> None:
        self.traced.add(bytes(pseudonym))
