"""
Independent derivation of the toy-backend test vectors.

Pure integer arithmetic over Z/1009Z, no imports from `src`: in the toy
groups every point is its discrete log, a pairing is a product and psi is the
identity. Inverses are found by exhaustive search rather than pow(a, -1, q)
so that nothing here shares code paths with the implementation.

    python scripts/derive_vectors.py > vectors.txt
"""
import hashlib
import sys
from typing import Dict

Q = 1009
TAGS = {"h1": 0x01, "h2": 0x02, "h3": 0x03, "h5": 0x05}
WIDTH = 2


def inverse(a: int, q: int = Q) -> int:
    a %= q
    for x in range(1, q):
        if a * x % q == 1:
            return x
    raise ZeroDivisionError(f"{a} has no inverse mod {q}")


def toy_hash(oracle: str, label: bytes, hash_seed: bytes = b"", q: int = Q) -> int:
    """SHAKE-256 over tag || seed || label, WIDTH+8 bytes, mapped into [1, q-1]."""
    digest = hashlib.shake_256(bytes([TAGS[oracle]]) + hash_seed + label).digest(WIDTH + 8)
    return 1 + int.from_bytes(digest, "big") % (q - 1)


def sc1() -> Dict[str, int]:
    """Signcryption with s=7, P_V=3, P_R=4, r=2, H3 -> 5 and an all-zero H5 mask."""
    s, P_V, P_R, r, h = 7, 3, 4, 2, 5
    U = s % Q
    LTK = s * P_V % Q
    B = s * P_R % Q
    Y = r * P_V % Q
    Z = (r + h) * LTK % Q
    omega = (r * LTK) * P_R % Q
    return {
        "U1": U, "U2": U, "P_V": P_V, "LTK": LTK, "P_R": P_R, "B": B,
        "r": r, "h": h, "Y": Y, "Z": Z, "omega": omega,
        "omega_rsu": Y * B % Q,
        "verify_lhs": Z * 1 % Q,
        "verify_rhs": (Y + h * P_V) * U % Q,
    }


def ag1() -> Dict[str, int]:
    """Two beacons under P_CS = 5 with s = 7; signer A has key points (2, 3), B has (8, 9)."""
    s, P_cs = 7, 5
    a = {"P0": 2, "P1": 3, "c": 4, "r": 6}
    b = {"P0": 8, "P1": 9, "c": 2, "r": 3}
    out = {"s": s, "P_cs": P_cs}
    combined = 0
    S1_total = S2_total = 0
    for name, v in (("A", a), ("B", b)):
        D0, D1 = s * v["P0"] % Q, s * v["P1"] % Q
        S2 = v["r"] % Q
        S1 = (v["r"] * P_cs + D0 + v["c"] * D1) % Q
        out.update({
            f"{name}_P0": v["P0"], f"{name}_P1": v["P1"], f"{name}_c": v["c"], f"{name}_r": v["r"],
            f"{name}_D0": D0, f"{name}_D1": D1, f"{name}_S1": S1, f"{name}_S2": S2,
            f"{name}_rhs": (S2 * P_cs + (v["P0"] + v["c"] * v["P1"]) * s) % Q,
        })
        combined += v["P0"] + v["c"] * v["P1"]
        S1_total += S1
        S2_total += S2
    out["agg_S1"] = S1_total % Q
    out["agg_S2"] = S2_total % Q
    out["agg_rhs"] = (S2_total * P_cs + combined * s) % Q
    return out


def keyless_signcrypt() -> Dict[str, int]:
    """Y = rP1 - h*P_V, Z = r*U1 with r=4, h=2, P_V=3, s=7."""
    s, r, h, P_V = 7, 4, 2, 3
    Y = (r - h * P_V) % Q
    Z = r * s % Q
    return {"Y": Y, "Z": Z, "verify_lhs": Z, "verify_rhs": (Y + h * P_V) * s % Q}


def keyless_sign_target_ordinary() -> Dict[str, int]:
    """Target STP under a non-designated string: P_CS = beta*U2, beta=5, s=7, P0=2, P1=3, c=4, r=6."""
    s, beta, P0, P1, c, r = 7, 5, 2, 3, 4, 6
    P_cs = beta * s % Q
    S2 = (r - inverse(beta) * (P0 + c * P1)) % Q
    S1 = r * P_cs % Q
    return {
        "P_cs": P_cs, "beta_inv": inverse(beta), "S1": S1, "S2": S2,
        "verify_rhs": (S2 * P_cs + (P0 + c * P1) * s) % Q,
    }


def signcryption_extractor() -> Dict[str, int]:
    """Two forgeries on Y=6 (r=2, P_V=3, s=7) with h=5 and h^=9."""
    s, r, P_V, h, h_hat = 7, 2, 3, 5, 9
    LTK = s * P_V % Q
    Z = (r + h) * LTK % Q
    Z_hat = (r + h_hat) * LTK % Q
    return {
        "Y": r * P_V % Q, "Z": Z, "Z_hat": Z_hat, "h": h, "h_hat": h_hat,
        "extracted": inverse(h - h_hat) * (Z - Z_hat) % Q, "LTK": LTK,
    }


def aggregate_extractor() -> Dict[str, int]:
    """
    One target entry with alpha_0=1, alpha'_0=2, alpha_1=1, alpha'_1=3 under
    the designated string beta=5, c=4, signed honestly with s=7 and r=6.
    """
    s, beta, c, r = 7, 5, 4, 6
    a0, a0p, a1, a1p = 1, 2, 1, 3
    U1 = s % Q
    P0 = (a0 + a0p * U1) % Q
    P1 = (a1 + a1p * U1) % Q
    D0, D1 = s * P0 % Q, s * P1 % Q
    S2 = r % Q
    S1 = (r * beta + D0 + c * D1) % Q
    coefficient = (a0p + c * a1p) % Q
    remainder = (S1 - beta * S2 - (a0 + c * a1) * U1) % Q
    return {
        "P0": P0, "P1": P1, "S1": S1, "S2": S2, "coefficient": coefficient,
        "remainder": remainder, "extracted": inverse(coefficient) * remainder % Q,
        "s_U1": s * U1 % Q,
    }


VECTORS = {
    "sc1": sc1,
    "ag1": ag1,
    "keyless_signcrypt": keyless_signcrypt,
    "keyless_sign_target_ordinary": keyless_sign_target_ordinary,
    "signcryption_extractor": signcryption_extractor,
    "aggregate_extractor": aggregate_extractor,
}


def main() -> int:
    for name, derive in VECTORS.items():
        for key, value in derive().items():
            sys.stdout.write(f"{name}.{key}={value}\n")
    sys.stdout.write(f"hash.h1.LTP-A={toy_hash('h1', b'LTP-A')}\n")
    sys.stdout.write(f"hash.h2.RSU-1={toy_hash('h2', b'RSU-1')}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
