"""
Programmable oracles, keyless simulators, extractors, forking and the forgery games.
"""
import random
from dataclasses import replace

import pytest

from scripts.derive_vectors import aggregate_extractor, keyless_sign_target_ordinary, keyless_signcrypt
from src.errors import (
    CredentialError,
    DegenerateForkError,
    ExtractionError,
    NoForkError,
    OracleProgrammingError,
    ProtocolViolation,
    SimulationAbort,
)
from src.games import GameId, Verdict, game_setup, run_forgery_game, run_suite
from src.games import adversaries
from src.games.extractors import (
    ForgeryPair,
    extract_cdh_from_aggregate_forgery,
    extract_cdh_from_signcryption_forgeries,
)
from src.games.forgery_game import make_challenger
from src.games.forking import CooperativeForger, fork_signcryption_forger
from src.games.oracle_table import (
    CommonStringTrapdoor,
    ExponentTrapdoor,
    KeyPointTrapdoor,
    OracleEntry,
    OracleId,
    OracleTable,
    QueryLedger,
    program_oracle,
)
from src.games.simulators import (
    BdhConfidentialitySimulator,
    CdhAggregateSimulator,
    CdhSigncryptionSimulator,
    simulate_sign_without_key,
    simulate_signcrypt_without_key,
)
from src.pairing import GtElement
from src.protocols.aggregate import (
    CommonString,
    aggregate,
    beacon_challenge_query,
    extract_short_term_key,
    key_point_queries,
    sign_beacon,
    verify_single,
)
from src.protocols.signcryption import (
    InnerSignature,
    RequestPlaintext,
    RsuCredential,
    SigncryptedEnvelope,
    designcrypt,
    extract_vehicle_key,
    setup,
    signcrypt,
)
from settings import TOY_SECURITY_LEVEL


@pytest.fixture
def table(suite) -> OracleTable:
    return OracleTable(suite, random.Random(12))


@pytest.fixture
def programmed(toy_setup, table):
    """Toy params with s = 7 whose oracles are `table`."""
    base, master = toy_setup
    return base.with_oracles(table), master


def _program_key_points(table, suite, stp, t0: KeyPointTrapdoor, t1: KeyPointTrapdoor, U1) -> None:
    q0, q1 = key_point_queries(stp)
    table.program(OracleId.H1, q0, t0.alpha * suite.P1 + t0.alpha_prime * U1, t0)
    table.program(OracleId.H1, q1, t1.alpha * suite.P1 + t1.alpha_prime * U1, t1)


class TestOracleTable:

    def test_programmed_answers_are_served(self, table, suite):
        program_oracle(table, OracleId.H1, b"LTP", 3 * suite.P1, ExponentTrapdoor(suite.scalar(3)))
        assert table.h1(b"LTP").value == 3
        assert table.trapdoor(OracleId.H1, b"LTP").x == 3

    def test_reprogramming_is_refused(self, table, suite):
        table.program(OracleId.H3, b"q", suite.scalar(5))
        with pytest.raises(OracleProgrammingError):
            table.program(OracleId.H3, b"q", suite.scalar(6))

    def test_answered_queries_cannot_be_programmed(self, table, suite):
        first = table.h2(b"RSU-1")
        with pytest.raises(OracleProgrammingError):
            table.program(OracleId.H2, b"RSU-1", 4 * suite.P2)
        assert table.h2(b"RSU-1") == first

    def test_fallback_is_seeded(self, suite):
        a, b = OracleTable(suite, random.Random(1)), OracleTable(suite, random.Random(1))
        assert [a.h3(bytes([i])) for i in range(20)] == [b.h3(bytes([i])) for i in range(20)]

    def test_h5_length_mismatch(self, table, suite):
        w = suite.pair(suite.P1, suite.P2)
        table.program(OracleId.H5, w.to_bytes(), bytes(4))
        with pytest.raises(OracleProgrammingError):
            table.h5(w, 64)

    def test_transcript(self, table, suite):
        table.h1(b"a")
        table.h3(b"b")
        table.h1(b"a")
        assert table.count("h1") == 2
        assert len(table) == 2
        lines = table.transcript_jsonl().splitlines()
        assert len(lines) == 3 and '"query":"h1"' in lines[0]

    def test_entries_keep_first_answer_order(self, table):
        for label in (b"z", b"a", b"m"):
            table.h1(label)
        assert [q for q, _ in table.entries(OracleId.H1)] == [b"z", b"a", b"m"]

    def test_handler_answers_unprogrammed_queries(self, table, suite):
        table.set_handler(OracleId.H2, lambda q: OracleEntry(9 * suite.P2))
        assert table.h2(b"anything").value == 9
        table.set_handler(OracleId.H2, None)
        assert table.h2(b"other") is not None

    def test_answers_never_change(self, table):
        rng = random.Random(5)
        seen = {}
        for _ in range(10_000):
            query = bytes([rng.randrange(64)])
            if rng.random() < 0.5:
                answer = table.h3(query)
            else:
                entry = table.lookup(OracleId.H3, query)
                if entry is None:
                    continue
                answer = entry.answer
            assert seen.setdefault(query, answer) == answer

    def test_ledger_is_append_only(self):
        ledger = QueryLedger()
        ledger.note_sign(b"m", b"stp")
        ledger.note_sign(b"m", b"stp")
        assert ledger.signed == {(b"m", b"stp")}


class TestKeylessSigncrypt:

    @pytest.fixture
    def fixture(self, programmed, table):
        params, _ = programmed
        suite = params.suite
        ltp = b"\x0a" * params.pseudonym_bytes
        table.program(OracleId.H1, ltp, 3 * suite.P1)
        table.program(OracleId.H2, b"RSU-1", 4 * suite.P2, ExponentTrapdoor(suite.scalar(4)))
        return params, ltp, RequestPlaintext(77, ltp, 3)

    def test_vector(self, fixture, table, rng):
        params, ltp, m = fixture
        expected = keyless_signcrypt()
        env = simulate_signcrypt_without_key(table, params, m, ltp, b"RSU-1", rng, r=4, h=2)
        assert env.Y.value == expected["Y"] == 1007
        assert table.lookup(OracleId.H3, env.Y.to_bytes() + m.encode(params.pseudonym_bytes)).answer == 2

        suite = params.suite
        opened, sig = designcrypt(params, RsuCredential(b"RSU-1", 4 * suite.P2, 28 * suite.P2), env)
        assert opened == m
        assert sig.Z.value == expected["Z"] == 28

    def test_repeated_query_aborts(self, fixture, table, rng):
        params, ltp, m = fixture
        simulate_signcrypt_without_key(table, params, m, ltp, b"RSU-1", rng, r=4, h=2)
        with pytest.raises(SimulationAbort):
            simulate_signcrypt_without_key(table, params, m, ltp, b"RSU-1", rng, r=4, h=2)
        assert table.count("abort") == 1

    def test_recipient_without_trapdoor_aborts(self, fixture, table, rng):
        params, ltp, m = fixture
        table.program(OracleId.H2, b"RSU-X", 8 * params.suite.P2)
        with pytest.raises(SimulationAbort):
            simulate_signcrypt_without_key(table, params, m, ltp, b"RSU-X", rng)

    def test_sender_mismatch(self, fixture, table, rng):
        params, ltp, m = fixture
        with pytest.raises(CredentialError):
            simulate_signcrypt_without_key(table, params, m, b"\x0b" * len(ltp), b"RSU-1", rng)


class TestKeylessSign:

    @pytest.fixture
    def target(self, programmed, table):
        """Target STP with key points 2 and 3, alpha' = 1 for both."""
        params, _ = programmed
        suite = params.suite
        stp = b"\x5a" * params.pseudonym_bytes
        t0 = KeyPointTrapdoor(suite.scalar(2 - 7), suite.scalar(1))
        t1 = KeyPointTrapdoor(suite.scalar(3 - 7), suite.scalar(1))
        _program_key_points(table, suite, stp, t0, t1, params.U1)
        return params, stp

    def test_target_under_ordinary_string(self, target, table, rng):
        params, stp = target
        suite = params.suite
        cs = CommonString(b"ordinary", 1)
        table.program(OracleId.H2, cs.cs, 35 * suite.P2, CommonStringTrapdoor(suite.scalar(5), False))
        table.program(OracleId.H3, beacon_challenge_query(b"case-3", stp, cs.cs), suite.scalar(4))

        expected = keyless_sign_target_ordinary()
        beacon = simulate_sign_without_key(table, params, b"case-3", stp, cs, rng, r=6)
        assert (beacon.S1.value, beacon.S2.value) == (expected["S1"], expected["S2"]) == (210, 205)
        assert verify_single(params, beacon, cs)

    def test_target_under_designated_string_aborts(self, target, table, rng):
        params, stp = target
        suite = params.suite
        cs = CommonString(b"designated", 0)
        table.program(OracleId.H2, cs.cs, 5 * suite.P2, CommonStringTrapdoor(suite.scalar(5), True))
        table.program(OracleId.H3, beacon_challenge_query(b"m", stp, cs.cs), suite.scalar(4))
        with pytest.raises(SimulationAbort):
            simulate_sign_without_key(table, params, b"m", stp, cs, rng)

    def test_target_on_the_programmed_challenge(self, target, table, rng):
        params, stp = target
        suite = params.suite
        cs = CommonString(b"designated", 0)
        table.program(OracleId.H2, cs.cs, 5 * suite.P2, CommonStringTrapdoor(suite.scalar(5), True))
        table.program(OracleId.H3, beacon_challenge_query(b"m", stp, cs.cs), suite.scalar(-1))
        beacon = simulate_sign_without_key(table, params, b"m", stp, cs, rng, r=6)
        assert verify_single(params, beacon, cs)

    def test_honest_form(self, programmed, table, rng):
        params, _ = programmed
        suite = params.suite
        stp = b"\x5b" * params.pseudonym_bytes
        _program_key_points(
            table, suite, stp,
            KeyPointTrapdoor(suite.scalar(8), suite.scalar(0)),
            KeyPointTrapdoor(suite.scalar(9), suite.scalar(0)),
            params.U1,
        )
        cs = CommonString(b"any", 2)
        table.program(OracleId.H2, cs.cs, 35 * suite.P2, CommonStringTrapdoor(suite.scalar(5), False))
        assert verify_single(params, simulate_sign_without_key(table, params, b"hello", stp, cs, rng), cs)

    def test_missing_trapdoors_abort(self, programmed, rng):
        params, _ = programmed
        with pytest.raises(SimulationAbort):
            simulate_sign_without_key(params.oracles, params, b"m", b"\x01" * 16, CommonString(b"cs", 0), rng)


class TestSigncryptionExtractor:

    def _pair(self, suite, **overrides):
        values = dict(Y=6, P_V=3, Z=147, Z_hat=231, h=5, h_hat=9)
        values.update(overrides)
        return ForgeryPair(
            Y=values["Y"] * suite.P1, m=b"", P_V=values["P_V"] * suite.P1,
            Z=values["Z"] * suite.P1, Z_hat=values["Z_hat"] * suite.P1,
            h=suite.scalar(values["h"]), h_hat=suite.scalar(values["h_hat"]),
        )

    def test_vector(self, params):
        assert extract_cdh_from_signcryption_forgeries(self._pair(params.suite), params).value == 21

    def test_same_challenge(self, params):
        with pytest.raises(NoForkError):
            extract_cdh_from_signcryption_forgeries(self._pair(params.suite, h_hat=5, Z_hat=147), params)

    def test_invalid_forgery(self, params):
        with pytest.raises(ExtractionError):
            extract_cdh_from_signcryption_forgeries(self._pair(params.suite, Z_hat=232), params)

    def test_forking_recovers_ltk(self, params, master):
        ltp = b"\x44" * params.pseudonym_bytes
        forger = CooperativeForger(master, RequestPlaintext(1, ltp, 2))
        for seed in range(10):
            pair = fork_signcryption_forger(forger, params, seed=seed)
            assert pair.h != pair.h_hat
            assert extract_cdh_from_signcryption_forgeries(pair, params) == master.s * pair.P_V

    def test_fork_with_same_answer(self, params, master):
        forger = CooperativeForger(master, RequestPlaintext(1, b"\x45" * params.pseudonym_bytes, 2))
        pair = fork_signcryption_forger(forger, params, seed=1)
        with pytest.raises(NoForkError):
            fork_signcryption_forger(forger, params, seed=1, h_hat=pair.h)

    def test_forger_without_queries(self, params):
        m = RequestPlaintext(1, b"\x46" * params.pseudonym_bytes, 2)
        suite = params.suite

        def lazy(p, r):
            return m, InnerSignature(suite.P1, suite.P1)
        with pytest.raises(ExtractionError):
            fork_signcryption_forger(lazy, params, seed=0)


class TestAggregateExtractor:

    @pytest.fixture
    def designated(self, programmed, table):
        """Target key points 1 + 2*U1 and 1 + 3*U1 under the designated string beta = 5, c = 4."""
        params, master = programmed
        suite = params.suite
        stp = b"\x77" * params.pseudonym_bytes
        _program_key_points(
            table, suite, stp,
            KeyPointTrapdoor(suite.scalar(1), suite.scalar(2)),
            KeyPointTrapdoor(suite.scalar(1), suite.scalar(3)),
            params.U1,
        )
        cs = CommonString(b"designated", 0)
        table.program(OracleId.H2, cs.cs, 5 * suite.P2, CommonStringTrapdoor(suite.scalar(5), True))
        table.program(OracleId.H3, beacon_challenge_query(b"target", stp, cs.cs), suite.scalar(4))
        return params, master, stp, cs

    def test_vector(self, designated, table, rng):
        params, master, stp, cs = designated
        cred = extract_short_term_key(params, master, stp)
        assert (cred.P0.value, cred.P1pt.value) == (15, 22)
        beacon = sign_beacon(params, cred, b"target", cs, rng, r=6)
        expected = aggregate_extractor()
        assert (beacon.S1.value, beacon.S2.value) == (expected["S1"], expected["S2"]) == (751, 6)

        extracted = extract_cdh_from_aggregate_forgery(aggregate(params, [beacon]), table, params, cs)
        assert extracted.value == expected["extracted"] == expected["s_U1"] == 49

    def test_with_honest_entries(self, designated, table, rng):
        params, master, stp, cs = designated
        suite = params.suite
        other = b"\x78" * params.pseudonym_bytes
        _program_key_points(
            table, suite, other,
            KeyPointTrapdoor(suite.scalar(2), suite.scalar(0)),
            KeyPointTrapdoor(suite.scalar(3), suite.scalar(0)),
            params.U1,
        )
        beacons = [
            sign_beacon(params, extract_short_term_key(params, master, stp), b"target", cs, rng),
            sign_beacon(params, extract_short_term_key(params, master, other), b"honest", cs, rng),
        ]
        assert extract_cdh_from_aggregate_forgery(aggregate(params, beacons), table, params, cs).value == 49

    def test_degenerate_challenge(self, programmed, table, rng):
        params, master = programmed
        suite = params.suite
        stp = b"\x79" * params.pseudonym_bytes
        _program_key_points(
            table, suite, stp,
            KeyPointTrapdoor(suite.scalar(1), suite.scalar(2)),
            KeyPointTrapdoor(suite.scalar(1), suite.scalar(3)),
            params.U1,
        )
        cs = CommonString(b"designated-2", 0)
        table.program(OracleId.H2, cs.cs, 5 * suite.P2, CommonStringTrapdoor(suite.scalar(5), True))
        c = -suite.scalar(2) * suite.scalar(3).inverse()
        table.program(OracleId.H3, beacon_challenge_query(b"m", stp, cs.cs), c)
        beacon = sign_beacon(params, extract_short_term_key(params, master, stp), b"m", cs, rng)
        with pytest.raises(DegenerateForkError):
            extract_cdh_from_aggregate_forgery(aggregate(params, [beacon]), table, params, cs)

    def test_ordinary_string_refused(self, designated, table, rng):
        params, master, stp, _ = designated
        suite = params.suite
        cs = CommonString(b"ordinary", 1)
        table.program(OracleId.H2, cs.cs, 35 * suite.P2, CommonStringTrapdoor(suite.scalar(5), False))
        beacon = sign_beacon(params, extract_short_term_key(params, master, stp), b"x", cs, rng)
        with pytest.raises(ExtractionError):
            extract_cdh_from_aggregate_forgery(aggregate(params, [beacon]), table, params, cs)

    def test_invalid_aggregate_refused(self, designated, table, rng):
        params, master, stp, cs = designated
        beacon = sign_beacon(params, extract_short_term_key(params, master, stp), b"target", cs, rng)
        agg = aggregate(params, [beacon])
        forged = type(agg)(agg.entries, agg.S1 + params.suite.P1, agg.S2)
        with pytest.raises(ExtractionError):
            extract_cdh_from_aggregate_forgery(forged, table, params, cs)


class TestReductionSimulators:

    @pytest.fixture
    def cdh(self, suite, rng) -> CdhSigncryptionSimulator:
        return CdhSigncryptionSimulator(suite, 3 * suite.P2, 7 * suite.P2, rng)

    def test_target_signcryptions_open_honestly(self, cdh, rng):
        suite = cdh.suite
        target = b"\x01" * cdh.params.pseudonym_bytes
        cdh.params.oracles.h1(target)
        assert cdh.target_ltp == target
        m = RequestPlaintext(5, target, 6)
        env = cdh.signcrypt(m, b"RSU-1")
        P_R = cdh.params.oracles.h2(b"RSU-1")
        assert designcrypt(cdh.params, RsuCredential(b"RSU-1", P_R, 7 * P_R), env)[0] == m
        assert cdh.designcrypt(env, b"RSU-1")[0] == m

    def test_target_key_is_never_extracted(self, cdh):
        target = b"\x01" * cdh.params.pseudonym_bytes
        cdh.params.oracles.h1(target)
        with pytest.raises(SimulationAbort):
            cdh.extract_vehicle(target)
        other = cdh.extract_vehicle(b"\x02" * cdh.params.pseudonym_bytes)
        assert cdh.suite.pair(other.LTK, cdh.suite.P2) == cdh.suite.pair(other.P_V, cdh.params.U2)

    def test_garbage_is_rejected(self, cdh, rng):
        env = SigncryptedEnvelope(cdh.suite.P1, rng.randbytes(cdh.params.l2_bytes))
        assert cdh.designcrypt(env, b"RSU-2") is None

    def test_channel_oracle(self, cdh):
        ltp = b"\x03" * cdh.params.pseudonym_bytes
        assert cdh.channel_decrypt(ltp, cdh.channel_encrypt(ltp, b"payload")) == b"payload"

    def test_confidentiality_challenge(self, suite, rng):
        sim = BdhConfidentialitySimulator(suite, 3 * suite.P2, 7 * suite.P2, 11 * suite.P1, rng)
        sim.params.oracles.h2(b"RSU-T")
        ltp = b"\x04" * sim.params.pseudonym_bytes
        m = RequestPlaintext(1, ltp, 1)
        env = sim.signcrypt(m, b"RSU-T")
        assert sim.designcrypt(env, b"RSU-T")[0] == m

        with pytest.raises(CredentialError):
            sim.challenge(b"RSU-T", m, RequestPlaintext(2, b"\x05" * len(ltp), 1))
        with pytest.raises(SimulationAbort):
            sim.challenge(b"RSU-OTHER", m, RequestPlaintext(2, ltp, 1))
        challenge = sim.challenge(b"RSU-T", m, RequestPlaintext(2, ltp, 1))
        assert challenge.Y.value == 11
        assert isinstance(sim.final_guess(), GtElement)
        with pytest.raises(SimulationAbort):
            sim.extract_rsu(b"RSU-T")

    def test_aggregate_simulator(self, suite, rng):
        sim = CdhAggregateSimulator(suite, 7 * suite.P2, rng)
        target = sim.issue_stp(b"RID-A")
        other = sim.issue_stp(b"RID-B")
        sim.params.oracles.h1(key_point_queries(target)[0])
        assert sim.target_stp == target
        with pytest.raises(SimulationAbort):
            sim.extract_short_term(target)
        cred = sim.extract_short_term(other)
        assert cred.D0 == 7 * cred.P0
        assert sim.trace(other) == b"RID-B"
        assert sim.trace(b"\x00" * 16) is None

        designated = CommonString(b"first", 0)
        ordinary = CommonString(b"second", 1)
        sim.params.oracles.h2(designated.cs)
        assert sim.designated_cs == designated.cs
        assert verify_single(sim.params, sim.sign(ordinary, b"a", target), ordinary)
        assert verify_single(sim.params, sim.sign(designated, b"b", target), designated)
        assert verify_single(sim.params, sim.sign(designated, b"c", other), designated)
        with pytest.raises(ValueError):
            CdhAggregateSimulator(suite, 7 * suite.P2, rng, target_index=0)


class TestForgeryGames:

    @pytest.fixture
    def keys(self):
        return game_setup(random.Random(31))

    def _play(self, game_id, adversary, keys, seed=0):
        params, master = keys
        return run_forgery_game(game_id, adversary, random.Random(seed), params, master)

    def test_replay(self, keys):
        assert self._play(GameId.SIGNCRYPT_AUTH, adversaries.replay_signcryption, keys).verdict is Verdict.REPLAYED
        assert self._play(GameId.AGGREGATE_AUTH, adversaries.replay_aggregate, keys).verdict is Verdict.REPLAYED

    def test_key_compromise(self, keys, rng):
        result = self._play(GameId.SIGNCRYPT_AUTH, adversaries.stolen_key_signcryption(rng), keys)
        assert result.verdict is Verdict.KEY_COMPROMISE
        assert result.won and not result.forged
        result = self._play(GameId.AGGREGATE_AUTH, adversaries.stolen_key_aggregate(rng), keys)
        assert result.verdict is Verdict.KEY_COMPROMISE

    def test_master_key_forgery_is_scored(self, keys, rng):
        _, master = keys

        def cheat(challenger):
            ltp, id_r = challenger.ltps[0], challenger.rsu_ids[0]
            cred = extract_vehicle_key(challenger.params, master, ltp)
            return signcrypt(challenger.params, cred, RequestPlaintext(9, ltp, 9), id_r, rng), id_r

        result = self._play(GameId.SIGNCRYPT_AUTH, cheat, keys)
        assert result.verdict is Verdict.FORGERY
        assert result.transcript[-1]["query"] == "verdict"

    def test_aggregate_forgery_is_scored(self, keys, rng):
        _, master = keys

        def cheat(challenger):
            stp = challenger.stps[0]
            cred = extract_short_term_key(challenger.params, master, stp)
            return aggregate(challenger.params, [sign_beacon(challenger.params, cred, b"fresh", challenger.common_string, rng)])

        assert self._play(GameId.AGGREGATE_AUTH, cheat, keys).forged

    def test_random_outputs_lose(self, keys, rng):
        losses = sum(
            not self._play(GameId.SIGNCRYPT_AUTH, adversaries.random_signcryption(rng), keys, seed=i).won
            for i in range(100)
        )
        assert losses >= 99
        losses = sum(
            not self._play(GameId.AGGREGATE_AUTH, adversaries.random_aggregate(rng), keys, seed=i).won
            for i in range(100)
        )
        assert losses >= 99

    def test_disqualifications(self, keys):
        result = self._play(GameId.AGGREGATE_AUTH, adversaries.common_string_reuser, keys)
        assert result.verdict is Verdict.DISQUALIFIED
        assert self._play(GameId.SIGNCRYPT_AUTH, lambda c: (b"", b"RSU-99"), keys).verdict is Verdict.DISQUALIFIED
        assert self._play(GameId.SIGNCRYPT_AUTH, lambda c: None, keys).verdict is Verdict.DISQUALIFIED

    def test_foreign_suite_elements_are_invalid(self, keys, rng):
        _, master = keys
        foreign, _ = setup(TOY_SECURITY_LEVEL, "toy", master_key=7, hash_seed=b"elsewhere")
        stranger = foreign.suite.hash_to_g1(b"stranger")

        def envelope_cheat(challenger):
            ltp, id_r = challenger.ltps[0], challenger.rsu_ids[0]
            cred = extract_vehicle_key(challenger.params, master, ltp)
            env = signcrypt(challenger.params, cred, RequestPlaintext(9, ltp, 9), id_r, rng)
            return replace(env, Y=stranger), id_r

        def aggregate_cheat(challenger):
            cred = extract_short_term_key(challenger.params, master, challenger.stps[0])
            beacon = sign_beacon(challenger.params, cred, b"fresh", challenger.common_string, rng)
            return replace(aggregate(challenger.params, [beacon]), S1=stranger)

        for game_id, cheat in ((GameId.SIGNCRYPT_AUTH, envelope_cheat), (GameId.AGGREGATE_AUTH, aggregate_cheat)):
            result = self._play(game_id, cheat, keys)
            assert result.verdict is Verdict.INVALID
            assert not result.won

    def test_surface_closes_after_response(self, keys):
        params, master = keys
        challenger = make_challenger(GameId.SIGNCRYPT_AUTH, params, master, random.Random(2))
        challenger.close()
        with pytest.raises(ProtocolViolation):
            challenger.extract_rsu(challenger.rsu_ids[0])


class TestSuites:

    @pytest.mark.parametrize("game_id", ["signcrypt_auth", "aggregate_auth"])
    def test_all_properties_pass(self, game_id):
        results = run_suite(game_id, trials=5, seed=1)
        assert results and all(r.passed for r in results), [r for r in results if not r.passed]

    def test_rejects_bad_requests(self):
        with pytest.raises(ValueError):
            run_suite("nonsense", 5, 1)
        with pytest.raises(ValueError):
            run_suite("signcrypt_auth", 0, 1)
