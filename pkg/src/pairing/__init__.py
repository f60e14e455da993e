from src.pairing.backend import BackendId, Group, PairingBackend
from src.pairing.elements import G1Element, G2Element, GtElement, Scalar
from src.pairing.oracles import HashOracles
from src.pairing.suite import BilinearSuite, make_suite

__all__ = [
    "BackendId",
    "BilinearSuite",
    "G1Element",
    "G2Element",
    "Group",
    "GtElement",
    "HashOracles",
    "PairingBackend",
    "Scalar",
    "make_suite",
]
