"""
Shared fixtures.

Toy-backend values are residues: in the toy groups every point is its
discrete log to the generator, so `k * suite.P1` is "the point k".
"""
import random
from dataclasses import dataclass

import pytest

from src.games.oracle_table import OracleId, OracleTable
from src.pairing import BilinearSuite
from src.pairing.bls12_381 import PY_ECC_AVAILABLE
from src.protocols.aggregate import CommonString, beacon_challenge_query, key_point_queries
from src.protocols.signcryption import MasterSecret, RequestPlaintext, SystemParams, setup
from settings import TOY_SECURITY_LEVEL

requires_py_ecc = pytest.mark.skipif(not PY_ECC_AVAILABLE, reason="py_ecc is not installed")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def suite() -> BilinearSuite:
    return BilinearSuite.toy()


@pytest.fixture
def toy_setup():
    """Toy parameters with s = 7 and honest oracles."""
    return setup(TOY_SECURITY_LEVEL, "toy", master_key=7)


@pytest.fixture
def params(toy_setup) -> SystemParams:
    return toy_setup[0]


@pytest.fixture
def master(toy_setup) -> MasterSecret:
    return toy_setup[1]


@dataclass
class Sc1Fixture:
    params: SystemParams
    master: MasterSecret
    table: OracleTable
    ltp: bytes
    id_r: bytes
    m: RequestPlaintext


@pytest.fixture
def sc1(toy_setup) -> Sc1Fixture:
    """
    H1(LTP) -> 3, H2(ID_R) -> 4, H3(Y=6 || m) -> 5, H5(168) -> zero mask, s = 7.
    Signcrypting with r = 2 gives Y = 6, Z = 147, w = 168.
    """
    base, master = toy_setup
    suite = base.suite
    table = OracleTable(suite, random.Random(1))
    params = base.with_oracles(table)
    ltp = bytes(range(params.pseudonym_bytes))
    id_r = b"RSU-1"
    m = RequestPlaintext(42, ltp, 1000)
    m_bytes = m.encode(params.pseudonym_bytes)

    table.program(OracleId.H1, ltp, 3 * suite.P1)
    table.program(OracleId.H2, id_r, 4 * suite.P2)
    table.program(OracleId.H3, (6 * suite.P1).to_bytes() + m_bytes, suite.scalar(5))
    table.program(OracleId.H5, suite.pair(6 * suite.P1, 28 * suite.P2).to_bytes(), bytes(params.l2_bytes))
    return Sc1Fixture(params, master, table, ltp, id_r, m)


@dataclass
class Ag1Fixture:
    params: SystemParams
    master: MasterSecret
    table: OracleTable
    cs: CommonString
    stp_a: bytes
    stp_b: bytes
    m_a: bytes
    m_b: bytes


@pytest.fixture
def ag1(toy_setup) -> Ag1Fixture:
    """
    s = 7, H2(CS) -> 5.
    Signer A: key points (2, 3), c = 4. Signer B: key points (8, 9), c = 2.
    """
    base, master = toy_setup
    suite = base.suite
    table = OracleTable(suite, random.Random(2))
    params = base.with_oracles(table)
    cs = CommonString(b"AG-1 common string", 0)
    stp_a = b"\xa0" * params.pseudonym_bytes
    stp_b = b"\xb0" * params.pseudonym_bytes
    m_a, m_b = b"beacon A", b"beacon B"

    table.program(OracleId.H2, cs.cs, 5 * suite.P2)
    for stp, (p0, p1), m, c in ((stp_a, (2, 3), m_a, 4), (stp_b, (8, 9), m_b, 2)):
        q0, q1 = key_point_queries(stp)
        table.program(OracleId.H1, q0, p0 * suite.P1)
        table.program(OracleId.H1, q1, p1 * suite.P1)
        table.program(OracleId.H3, beacon_challenge_query(m, stp, cs.cs), suite.scalar(c))
    return Ag1Fixture(params, master, table, cs, stp_a, stp_b, m_a, m_b)
