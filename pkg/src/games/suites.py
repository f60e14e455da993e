"""
Property suites behind `main.py game`.

Each suite runs the reductions and games of one security notion on the toy
backend and reports one `PropertyResult` per property. Everything is drawn
from `random.Random(f"game:{game_id}:{seed}")`, so a suite is a pure function
of (game_id, trials, seed).
"""
import random
from dataclasses import dataclass
from typing import Callable, List, Tuple

from src.errors import VanetError
from src.games import adversaries
from src.games.extractors import extract_cdh_from_aggregate_forgery, extract_cdh_from_signcryption_forgeries
from src.games.forgery_game import GameId, Verdict, game_setup, run_forgery_game
from src.games.forking import CooperativeForger, fork_signcryption_forger
from src.games.simulators import BdhConfidentialitySimulator, CdhAggregateSimulator, CdhSigncryptionSimulator
from src.pairing import BilinearSuite, Scalar
from src.protocols.aggregate import (
    CommonString,
    ShortTermCredential,
    aggregate,
    beacon_challenge,
    key_points,
    sign_beacon,
    verify_single,
)
from src.protocols.signcryption import RequestPlaintext, RsuCredential, designcrypt
from src.utils.logger import get_logger
from settings import RANDOM_GUESS_ATTEMPTS, RANDOM_GUESS_WIN_CEILING

logger = get_logger(__name__)

# Far beyond any query count in a trial: the target never receives the
# programmed challenge unless a property asks for it.
_NEVER = 2 ** 31


@dataclass
class PropertyResult:
    name: str
    passed: bool
    successes: int
    trials: int
    detail: str = ""


def _count(name: str, trials: int, trial: Callable[[int], bool]) -> PropertyResult:
    successes = 0
    failures: List[str] = []
    for i in range(trials):
        try:
            ok = trial(i)
        except VanetError as e:
            ok = False
            failures.append(f"trial {i}: {type(e).__name__}: {e}")
        successes += int(ok)
    detail = failures[0] if failures else ""
    return PropertyResult(name, successes == trials, successes, trials, detail)


def _instance(suite: BilinearSuite, rng: random.Random) -> Tuple[Scalar, Scalar]:
    a, b = suite.random_scalar(rng), suite.random_scalar(rng)
    return a, b


# signcrypt_auth


def _signcryption_simulation_soundness(suite: BilinearSuite, rng: random.Random, trials: int) -> PropertyResult:
    def trial(_: int) -> bool:
        a, b = _instance(suite, rng)
        sim = CdhSigncryptionSimulator(suite, a * suite.P2, b * suite.P2, rng)
        ltp = rng.randbytes(sim.params.pseudonym_bytes)
        sim.params.oracles.h1(ltp)
        id_r = b"RSU-SIM"
        m = RequestPlaintext(rng.getrandbits(64), ltp, rng.getrandbits(32))
        envelope = sim.signcrypt(m, id_r)
        P_R = sim.params.oracles.h2(id_r)
        opened, _ = designcrypt(sim.params, RsuCredential(id_r, P_R, b * P_R), envelope)
        return opened == m
    return _count("signcrypt_simulation_soundness", trials, trial)


def _signcryption_extractor(suite: BilinearSuite, rng: random.Random, trials: int) -> PropertyResult:
    params, master = game_setup(rng)

    def trial(i: int) -> bool:
        ltp = rng.randbytes(params.pseudonym_bytes)
        forger = CooperativeForger(master, RequestPlaintext(i, ltp, rng.getrandbits(32)))
        pair = fork_signcryption_forger(forger, params, seed=rng.getrandbits(64))
        extracted = extract_cdh_from_signcryption_forgeries(pair, params)
        return extracted == master.s * pair.P_V
    return _count("signcrypt_extractor_recovers_ltk", trials, trial)


def _confidentiality_target_queries(suite: BilinearSuite, rng: random.Random, trials: int) -> PropertyResult:
    def trial(_: int) -> bool:
        a, b = _instance(suite, rng)
        c = suite.random_scalar(rng)
        sim = BdhConfidentialitySimulator(suite, a * suite.P2, b * suite.P2, c * suite.P1, rng)
        target = b"RSU-TARGET"
        sim.params.oracles.h2(target)
        ltp = rng.randbytes(sim.params.pseudonym_bytes)
        m = RequestPlaintext(rng.getrandbits(64), ltp, rng.getrandbits(32))
        envelope = sim.signcrypt(m, target)
        opened = sim.designcrypt(envelope, target)
        sim.challenge(target, m, RequestPlaintext(m.n + 1, ltp, m.tau))
        sim.final_guess()
        return opened is not None and opened[0] == m
    return _count("confidentiality_target_designcrypt", trials, trial)


def _random_guess(game_id: GameId, factory, rng: random.Random) -> PropertyResult:
    params, master = game_setup(rng)
    wins = 0
    for _ in range(RANDOM_GUESS_ATTEMPTS):
        wins += int(run_forgery_game(game_id, factory(rng), rng, params, master).won)
    return PropertyResult(
        f"{game_id.value}_random_guess",
        wins <= RANDOM_GUESS_WIN_CEILING,
        RANDOM_GUESS_ATTEMPTS - wins,
        RANDOM_GUESS_ATTEMPTS,
        f"{wins} wins",
    )


def _scripted(game_id: GameId, rng: random.Random, cases) -> PropertyResult:
    params, master = game_setup(rng)
    mismatches = []
    for name, adversary, expected in cases:
        verdict = run_forgery_game(game_id, adversary, rng, params, master).verdict
        if verdict is not expected:
            mismatches.append(f"{name}: {verdict.value} != {expected.value}")
    return PropertyResult(
        f"{game_id.value}_ledger_rules",
        not mismatches,
        len(cases) - len(mismatches),
        len(cases),
        "; ".join(mismatches),
    )


def _signcrypt_suite(suite: BilinearSuite, rng: random.Random, trials: int) -> List[PropertyResult]:
    game_id = GameId.SIGNCRYPT_AUTH
    return [
        _signcryption_simulation_soundness(suite, rng, trials),
        _signcryption_extractor(suite, rng, trials),
        _confidentiality_target_queries(suite, rng, trials),
        _scripted(game_id, rng, [
            ("replay", adversaries.replay_signcryption, Verdict.REPLAYED),
            ("stolen_key", adversaries.stolen_key_signcryption(rng), Verdict.KEY_COMPROMISE),
        ]),
        _random_guess(game_id, adversaries.random_signcryption, rng),
    ]


# aggregate_auth


def _aggregate_simulation_soundness(suite: BilinearSuite, rng: random.Random, trials: int) -> PropertyResult:
    """Per trial one beacon from each signing case: honest form, target off and on the designated string."""
    def trial(_: int) -> bool:
        b = suite.random_scalar(rng)
        sim = CdhAggregateSimulator(suite, b * suite.P2, rng)
        target = sim.issue_stp(b"RID-A")
        other = sim.issue_stp(b"RID-B")
        key_points(sim.params, target)
        designated = CommonString(rng.randbytes(32), 0)
        ordinary = CommonString(rng.randbytes(32), 1)
        sim.params.oracles.h2(designated.cs)
        beacons = [
            (sim.sign(ordinary, b"case-3", target), ordinary),
            (sim.sign(designated, b"case-4", other), designated),
            (sim.sign(ordinary, b"case-4b", other), ordinary),
            (sim.sign(designated, b"case-1", target), designated),
        ]
        return all(verify_single(sim.params, beacon, cs) for beacon, cs in beacons)
    return _count("aggregate_simulation_soundness", trials, trial)


def _fresh_target_message(sim: CdhAggregateSimulator, stp: bytes, cs: CommonString, rng: random.Random) -> bytes:
    """A message whose challenge keeps the target's U1 coefficient nonzero."""
    t0, t1 = sim.key_point_trapdoors(stp)
    while True:
        m = rng.randbytes(12)
        c = beacon_challenge(sim.params, m, stp, cs)
        if not (t0.alpha_prime + c * t1.alpha_prime).is_zero():
            return m


def _aggregate_extractor(suite: BilinearSuite, rng: random.Random, trials: int) -> PropertyResult:
    def trial(i: int) -> bool:
        s = suite.random_scalar(rng)
        sim = CdhAggregateSimulator(suite, s * suite.P2, rng, challenge_index=_NEVER)
        stps = [sim.issue_stp(f"RID-{j}".encode()) for j in range(1 + i % 3)]
        for stp in stps:
            key_points(sim.params, stp)
        cs = CommonString(rng.randbytes(32), 0)
        sim.params.oracles.h2(cs.cs)

        beacons = []
        for index, stp in enumerate(stps):
            P0, P1pt = key_points(sim.params, stp)
            cred = ShortTermCredential(stp, P0, P1pt, s * P0, s * P1pt)
            m = _fresh_target_message(sim, stp, cs, rng) if index == 0 else f"honest-{index}".encode()
            beacons.append(sign_beacon(sim.params, cred, m, cs, rng))
        extracted = extract_cdh_from_aggregate_forgery(aggregate(sim.params, beacons), sim.table, sim.params, cs)
        return extracted == s * sim.params.U1
    return _count("aggregate_extractor_identity", trials, trial)


def _aggregate_suite(suite: BilinearSuite, rng: random.Random, trials: int) -> List[PropertyResult]:
    game_id = GameId.AGGREGATE_AUTH
    return [
        _aggregate_simulation_soundness(suite, rng, trials),
        _aggregate_extractor(suite, rng, trials),
        _scripted(game_id, rng, [
            ("replay", adversaries.replay_aggregate, Verdict.REPLAYED),
            ("stolen_key", adversaries.stolen_key_aggregate(rng), Verdict.KEY_COMPROMISE),
            ("common_string_reuse", adversaries.common_string_reuser, Verdict.DISQUALIFIED),
        ]),
        _random_guess(game_id, adversaries.random_aggregate, rng),
    ]


def run_suite(game_id: str, trials: int, seed: int) -> List[PropertyResult]:
    """
    Run every property of one game on the toy backend.

    Raises:
        ValueError: unknown game id or nonpositive trial count.
    """
    game = GameId(game_id)
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = random.Random(f"game:{game.value}:{seed}")
    suite = BilinearSuite.toy()
    if game is GameId.SIGNCRYPT_AUTH:
        results = _signcrypt_suite(suite, rng, trials)
    else:
        results = _aggregate_suite(suite, rng, trials)
    for result in results:
        logger.info(
            "%s %s: %d/%d %s", "PASS" if result.passed else "FAIL",
            result.name, result.successes, result.trials, result.detail
        )
    return results
