"""
CDH extractors: turn forgeries into the embedded Diffie-Hellman value.

    signcryption:  two forgeries (Y, Z, h) and (Y, Z^, h^) on one (Y, m, LTP)
                   give (h - h^)^-1 (Z - Z^) = s*P_V
    aggregate:     one aggregate under the designated string with the target
                   STP signed on a fresh challenge gives
                   (alpha'_0 + c*alpha'_1)^-1 (S1 - sum_{i>=2}(alpha_i0 + c_i*alpha_i1)U1
                                               - beta*S2 - (alpha_0 + c*alpha_1)U1)
"""
from dataclasses import dataclass
from typing import List, Tuple

from src.errors import DegenerateForkError, ExtractionError, NoForkError
from src.games.oracle_table import CommonStringTrapdoor, KeyPointTrapdoor, OracleId, OracleTable
from src.pairing import G1Element, Scalar
from src.protocols.aggregate import (
    AggregateSignature,
    CommonString,
    beacon_challenge_query,
    key_point_queries,
    verify_aggregate,
)
from src.protocols.signcryption import SystemParams
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ForgeryPair:
    """Two signcryption forgeries sharing (Y, m, P_V) with different H3 answers."""
    Y: G1Element
    m: bytes
    P_V: G1Element
    Z: G1Element
    Z_hat: G1Element
    h: Scalar
    h_hat: Scalar


def _pair_verifies(params: SystemParams, Y: G1Element, P_V: G1Element, Z: G1Element, h: Scalar) -> bool:
    suite = params.suite
    return suite.pair(Z, suite.P2) == suite.pair(Y + h * P_V, params.U2)


def extract_cdh_from_signcryption_forgeries(pair: ForgeryPair, params: SystemParams) -> G1Element:
    """
    (h - h^)^-1 (Z - Z^).

    Raises:
        NoForkError: h == h^.
        ExtractionError: either forgery fails its verification equation.
    """
    if pair.h == pair.h_hat:
        raise NoForkError("Both runs received the same H3 answer")
    if not _pair_verifies(params, pair.Y, pair.P_V, pair.Z, pair.h):
        raise ExtractionError("First forgery does not verify")
    if not _pair_verifies(params, pair.Y, pair.P_V, pair.Z_hat, pair.h_hat):
        raise ExtractionError("Forked forgery does not verify")
    return (pair.h - pair.h_hat).inverse() * (pair.Z - pair.Z_hat)


def _entry_trapdoors(table: OracleTable, stp: bytes) -> Tuple[KeyPointTrapdoor, KeyPointTrapdoor]:
    q0, q1 = key_point_queries(stp)
    t0, t1 = table.trapdoor(OracleId.H1, q0), table.trapdoor(OracleId.H1, q1)
    if not isinstance(t0, KeyPointTrapdoor) or not isinstance(t1, KeyPointTrapdoor):
        raise ExtractionError(f"No key-point trapdoors for STP {stp.hex()}")
    return t0, t1


def extract_cdh_from_aggregate_forgery(
    agg: AggregateSignature,
    table: OracleTable,
    params: SystemParams,
    cs: CommonString
) -> G1Element:
    """
    Apply the aggregate extraction formula to a verifying forgery.

    The first entry whose key points carry a U1 component is the target; all
    other entries must be in honest form (alpha' = 0).

    Raises:
        ExtractionError: the aggregate does not verify, CS is not the
            designated string, a trapdoor or challenge is missing, or the
            entries do not contain exactly one target.
        DegenerateForkError: alpha'_0 + c*alpha'_1 = 0 for the target.
    """
    if not verify_aggregate(params, agg, cs):
        raise ExtractionError("Aggregate forgery does not verify")
    cs_trapdoor = table.trapdoor(OracleId.H2, cs.cs)
    if not isinstance(cs_trapdoor, CommonStringTrapdoor) or not cs_trapdoor.designated:
        raise ExtractionError("Forgery is not under the designated common string")

    U1 = params.U1
    target = None
    others: List[G1Element] = []
    for m, stp in agg.entries:
        t0, t1 = _entry_trapdoors(table, stp)
        challenge = table.lookup(OracleId.H3, beacon_challenge_query(m, stp, cs.cs))
        if challenge is None:
            raise ExtractionError("Challenge scalar was never answered by H3")
        c = challenge.answer
        is_target = not (t0.alpha_prime.is_zero() and t1.alpha_prime.is_zero())
        if is_target and target is None:
            target = (t0, t1, c)
        elif is_target:
            raise ExtractionError("More than one entry carries the embedded target")
        else:
            others.append((t0.alpha + c * t1.alpha) * U1)
    if target is None:
        raise ExtractionError("No entry uses the target STP")

    t0, t1, c = target
    coefficient = t0.alpha_prime + c * t1.alpha_prime
    if coefficient.is_zero():
        raise DegenerateForkError("alpha'_0 + c*alpha'_1 vanishes for the target entry")

    remainder = agg.S1 - cs_trapdoor.beta * agg.S2 - (t0.alpha + c * t1.alpha) * U1
    for term in others:
        remainder = remainder - term
    logger.debug("Extracted from an aggregate of %d entries", len(agg.entries))
    return coefficient.inverse() * remainder
