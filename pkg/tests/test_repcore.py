from fractions import Fraction

import pytest

from qloopk.linalg import Mat
from qloopk.repcore import (RepError, build_eval_rep_sl2, build_rep,
                            build_vector_rep_slN_eval, coproduct_op,
                            ell_highest_indices, pullback_chevalley_tau,
                            tensor, verify_relations)
from qloopk.scalars import Rat, const, one, q, zero


class TestBuilders:
    def test_fundamental_matrices(self, fund, a):
        assert fund.dim == 2
        assert fund.E[1] == Mat([[zero, one], [zero, zero]])
        assert fund.F[1] == Mat([[zero, zero], [one, zero]])
        assert fund.K[1] == Mat.diagonal([q, q.inv()])
        assert fund.E[0] == fund.F[1].scale(a)
        assert fund.F[0] == fund.E[1].scale(a.inv())

    def test_fundamental_weights(self, fund):
        assert fund.weights[0] == (Fraction(-1), Fraction(1))
        assert fund.weights[1] == (Fraction(1), Fraction(-1))

    def test_spin1_qintegers(self, spin1):
        assert spin1.dim == 3
        # E_1[k-1, k] is the symmetric quantum integer [k]
        assert spin1.E[1][0, 1] == one
        assert spin1.E[1][1, 2] == q + q.inv()

    def test_vector_rep(self, vec3):
        assert vec3.dim == 3
        assert vec3.E[1][0, 1] == one
        assert vec3.K[2] == Mat.diagonal([one, q, q.inv()])

    def test_build_rep_dispatch(self, a):
        r = build_rep({"kind": "eval-sl2", "spin2": 2, "a": a})
        assert r.dim == 3
        with pytest.raises(RepError):
            build_rep({"kind": "mystery"})

    def test_central_K_product_is_identity(self, fund, spin1, vec3):
        for rep in (fund, spin1, vec3):
            prod = Mat.identity(rep.dim)
            for i in rep.cartan.nodes:
                prod = prod @ rep.K[i].pow(rep.cartan.marks[i])
            assert prod.is_identity()


class TestRelations:
    def test_builders_pass(self, fund, spin1, vec3):
        for rep in (fund, spin1, vec3):
            report = verify_relations(rep)
            assert report.ok, report.failures

    def test_broken_rep_fails(self, fund):
        import dataclasses
        bad = dataclasses.replace(fund, E=dict(fund.E))
        bad.E[1] = fund.E[1].scale(q)
        report = verify_relations(bad)
        assert not report.ok
        assert report.failures

    def test_tensor_passes(self, fund, fund_b):
        report = verify_relations(tensor(fund, fund_b))
        assert report.ok, report.failures

    def test_opposite_coproduct_passes(self, fund, fund_b):
        report = verify_relations(coproduct_op(fund, fund_b))
        assert report.ok, report.failures


class TestStructure:
    def test_ell_highest_fundamental(self, fund):
        assert ell_highest_indices(fund) == [0]

    def test_ell_highest_tensor(self, fund, fund_b):
        # the tensor of two evaluation modules has a unique vector killed
        # by F_0 and the classical raising operators
        assert len(ell_highest_indices(tensor(fund, fund_b))) == 1

    def test_pullback_involutive(self, fund):
        tau = (0, 1)
        back = pullback_chevalley_tau(pullback_chevalley_tau(fund, tau), tau)
        for i in (0, 1):
            assert back.E[i] == fund.E[i]
            assert back.F[i] == fund.F[i]
            assert back.K[i] == fund.K[i]

    def test_pullback_satisfies_relations(self, fund):
        report = verify_relations(pullback_chevalley_tau(fund, (0, 1)))
        assert report.ok, report.failures

    def test_conjugated_recovers_weights(self, fund):
        C = Mat([[zero, one], [one, zero]])
        flipped = fund.conjugated(C)
        assert flipped.weights[0] == fund.weights[1]
        assert verify_relations(flipped).ok

    def test_kinv(self, fund):
        assert fund.K[1] @ fund.Kinv(1) == Mat.identity(2)
