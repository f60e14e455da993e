"""
Scripted adversaries for the forgery games.

Each factory returns a callable taking the challenger and returning the
adversary's response, so they plug straight into `run_forgery_game`.
"""
import random

from src.games.forgery_game import AggregateChallenger, SigncryptionChallenger
from src.pairing import Group
from src.protocols.aggregate import aggregate, sign_beacon
from src.protocols.signcryption import RequestPlaintext, signcrypt
from src.utils.helpers import pack_u32


def replay_signcryption(challenger: SigncryptionChallenger):
    """Ask for a signcryption and hand it back."""
    ltp, id_r = challenger.ltps[0], challenger.rsu_ids[0]
    envelope = challenger.signcrypt(RequestPlaintext(1, ltp, 0), id_r)
    return envelope, id_r


def stolen_key_signcryption(rng: random.Random):
    """Extract a vehicle's LTK, then signcrypt a message never queried."""
    def play(challenger: SigncryptionChallenger):
        ltp, id_r = challenger.ltps[-1], challenger.rsu_ids[-1]
        cred = challenger.extract_vehicle(ltp)
        m = RequestPlaintext(rng.getrandbits(64), ltp, rng.getrandbits(32))
        return signcrypt(challenger.params, cred, m, id_r, rng), id_r
    return play


def random_signcryption(rng: random.Random):
    """Uniformly random envelope bytes of the right length."""
    def play(challenger: SigncryptionChallenger):
        params = challenger.params
        width = params.suite.element_width(Group.G1) + params.l2_bytes
        return rng.randbytes(width), challenger.rsu_ids[rng.randrange(len(challenger.rsu_ids))]
    return play


def replay_aggregate(challenger: AggregateChallenger):
    """Aggregate two beacons obtained from the signing oracle."""
    beacons = [challenger.sign(f"beacon-{i}".encode(), stp) for i, stp in enumerate(challenger.stps[:2])]
    return aggregate(challenger.params, beacons)


def stolen_key_aggregate(rng: random.Random):
    """Extract one STK and sign a fresh beacon with it."""
    def play(challenger: AggregateChallenger):
        stp = challenger.stps[-1]
        cred = challenger.extract_short_term(stp)
        beacon = sign_beacon(challenger.params, cred, b"never-queried", challenger.common_string, rng)
        return aggregate(challenger.params, [beacon])
    return play


def random_aggregate(rng: random.Random):
    """One fresh (m, STP) entry with uniformly random signature bytes."""
    def play(challenger: AggregateChallenger):
        width = challenger.params.suite.element_width(Group.G1)
        m = rng.randbytes(16)
        stp = challenger.stps[rng.randrange(len(challenger.stps))]
        return pack_u32(1) + pack_u32(len(m)) + m + stp + rng.randbytes(2 * width)
    return play


def common_string_reuser(challenger: AggregateChallenger):
    """Ask one STP to sign twice under the game's common string."""
    stp = challenger.stps[0]
    challenger.sign(b"first", stp)
    challenger.sign(b"second", stp)
    return None
