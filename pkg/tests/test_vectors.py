"""
Cross-check the implementation against the plain-integer derivations in
scripts/derive_vectors.py.
"""
import pytest

from scripts import derive_vectors
from src.protocols.aggregate import aggregate, extract_short_term_key, sign_beacon
from src.protocols.signcryption import designcrypt, extract_rsu_key, extract_vehicle_key, signcrypt


class TestIndependentArithmetic:

    @pytest.mark.parametrize("a", [1, 2, 5, 807, 1008])
    def test_inverse(self, a):
        assert a * derive_vectors.inverse(a) % derive_vectors.Q == 1

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            derive_vectors.inverse(0)

    @pytest.mark.parametrize("name", sorted(derive_vectors.VECTORS))
    def test_every_equation_balances(self, name):
        values = derive_vectors.VECTORS[name]()
        for lhs_key, rhs_key in (("verify_lhs", "verify_rhs"), ("omega", "omega_rsu"), ("agg_S1", "agg_rhs")):
            if lhs_key in values:
                assert values[lhs_key] == values[rhs_key]
        if "A_rhs" in values:
            assert values["A_S1"] == values["A_rhs"]
            assert values["B_S1"] == values["B_rhs"]

    def test_main_writes_every_vector(self, capsys):
        assert derive_vectors.main() == 0
        out = capsys.readouterr().out
        assert "sc1.Z=147\n" in out
        assert "aggregate_extractor.extracted=49\n" in out


class TestImplementationAgrees:

    def test_hash_to_groups(self, suite):
        assert suite.hash_to_g1(b"LTP-A").value == derive_vectors.toy_hash("h1", b"LTP-A")
        assert suite.hash_to_g2(b"RSU-1").value == derive_vectors.toy_hash("h2", b"RSU-1")

    def test_signcryption(self, sc1, rng):
        expected = derive_vectors.sc1()
        params = sc1.params
        cred = extract_vehicle_key(params, sc1.master, sc1.ltp)
        rsu = extract_rsu_key(params, sc1.master, sc1.id_r)
        assert (params.U1.value, params.U2.value) == (expected["U1"], expected["U2"])
        assert (cred.P_V.value, cred.LTK.value) == (expected["P_V"], expected["LTK"])
        assert (rsu.P_R.value, rsu.B.value) == (expected["P_R"], expected["B"])

        env = signcrypt(params, cred, sc1.m, sc1.id_r, rng, r=expected["r"])
        _, sig = designcrypt(params, rsu, env)
        assert env.Y.value == expected["Y"]
        assert sig.Z.value == expected["Z"]
        assert params.suite.pair(env.Y, rsu.B).value == expected["omega"]

    def test_aggregate(self, ag1, rng):
        expected = derive_vectors.ag1()
        params = ag1.params
        beacons = []
        for name, stp, m in (("A", ag1.stp_a, ag1.m_a), ("B", ag1.stp_b, ag1.m_b)):
            cred = extract_short_term_key(params, ag1.master, stp)
            assert (cred.D0.value, cred.D1.value) == (expected[f"{name}_D0"], expected[f"{name}_D1"])
            beacon = sign_beacon(params, cred, m, ag1.cs, rng, r=expected[f"{name}_r"])
            assert (beacon.S1.value, beacon.S2.value) == (expected[f"{name}_S1"], expected[f"{name}_S2"])
            beacons.append(beacon)
        agg = aggregate(params, beacons)
        assert (agg.S1.value, agg.S2.value) == (expected["agg_S1"], expected["agg_S2"])
