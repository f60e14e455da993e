"""
Hash Oracles
============

The protocols never call the suite's hash functions directly; they go through
a `HashOracles` object carried by the system parameters. The honest instance
below simply forwards to the suite. Security games swap in a programmable
`OracleTable` (see `src.games.oracle_table`) so that honest algorithms and
reduction simulators answer from one shared random-oracle state.
"""
from src.pairing.elements import G1Element, G2Element, GtElement, Scalar
from src.pairing.suite import BilinearSuite


class HashOracles:
    """H1: {0,1}* -> G1, H2: {0,1}* -> G2, H3: {0,1}* -> Z_q^*, H5: GT -> {0,1}^l2."""

    def __init__(self, suite: BilinearSuite):
        self.suite = suite

    def h1(self, query: bytes) -> G1Element:
        return self.suite.hash_to_g1(query)

    def h2(self, query: bytes) -> G2Element:
        return self.suite.hash_to_g2(query)

    def h3(self, query: bytes) -> Scalar:
        return self.suite.hash_to_scalar(query)

    def h5(self, w: GtElement, out_len_bits: int) -> bytes:
        return self.suite.mask_bytes(w, out_len_bits)
