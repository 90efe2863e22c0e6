import numpy as np
import pytest

from mmfp.field import find_roots
from mmfp.hecke import (
    Eigensystem,
    apply_tl,
    basis_precision,
    decompose_eigensystems,
    eigenvalue_of,
    eisenstein_eigensystem,
    hecke_matrix,
)
from mmfp.linalg import charpoly
from mmfp.qseries import QSeries, delta_qexp, eisenstein_qexp
from mmfp.regression_fixtures import REGRESSION_CASES
from mmfp.spaces import miller_basis
from mmfp.utils.errors import EllEqualsP, InsufficientPrecision, NotAnEigenform, NotPrime
from mmfp.utils.utils import first_primes, primes_up_to


def find_record(records, values):
    for record in records:
        if record.resolved and record.eigensystem.residues()[:len(values)] == list(values):
            return record
    return None


class TestApplyTl:
    def test_zero_series(self, f5):
        assert apply_tl(QSeries.zero(f5, 10, 12), 2, 5).is_zero()

    def test_e4_mod_7(self):
        e4 = eisenstein_qexp(4, 7, 20)
        t2 = apply_tl(e4, 2, 7)
        assert t2.precision == 10
        assert t2.agrees_with(e4.scale(2))

    def test_delta_mod_5(self):
        delta = delta_qexp(5, 20)
        assert apply_tl(delta, 2, 5).agrees_with(delta)

    def test_ell_equals_p(self):
        with pytest.raises(EllEqualsP):
            apply_tl(delta_qexp(5, 20), 5, 5)

    def test_ell_not_prime(self):
        with pytest.raises(NotPrime):
            apply_tl(delta_qexp(5, 20), 4, 5)

    def test_weight_zero_constant(self, f7):
        # T_l on the weight-0 constant scales by 1 + l^{-1}
        one = QSeries.one(f7, 10, 0)
        assert eigenvalue_of(one, 3, 7) == 1 + pow(3, -1, 7)


class TestEigenvalueOf:
    def test_eisenstein(self):
        assert eigenvalue_of(eisenstein_qexp(4, 7, 40), 3, 7) == 1 + 3 ** 3

    def test_not_an_eigenform(self):
        # E_4^3 + 2 Delta = E_12 + Delta mod 7, and E_12, Delta have different T_2 eigenvalues
        f = eisenstein_qexp(4, 7, 40) ** 3 + delta_qexp(7, 40).scale(2)
        with pytest.raises(NotAnEigenform):
            eigenvalue_of(f, 2, 7)

    def test_insufficient_precision(self):
        with pytest.raises(InsufficientPrecision):
            eigenvalue_of(delta_qexp(5, 5), 3, 5)


class TestHeckeMatrix:
    def test_zero_dimensional(self):
        space = miller_basis(0, 5, 10, cuspidal=True)
        assert hecke_matrix(space, 2).entries.shape == (0, 0)

    def test_s12_mod_5(self):
        space = miller_basis(12, 5, 10, cuspidal=True)
        assert hecke_matrix(space, 2).entries.tolist() == [[1]]

    def test_s24_mod_5_has_eigenvalue_4(self):
        space = miller_basis(24, 5, 10, cuspidal=True)
        matrix = hecke_matrix(space, 2)
        assert matrix.size == 2
        roots = find_roots(charpoly(space.field, matrix.entries), space.field)
        assert 4 in [r.residue for r in roots]

    def test_needs_precision(self):
        space = miller_basis(24, 5, 5, cuspidal=True)
        with pytest.raises(InsufficientPrecision):
            hecke_matrix(space, 3)

    @pytest.mark.parametrize("p", [5, 7])
    def test_commutativity(self, p):
        ells = [ell for ell in (2, 3, 5, 11, 13) if ell != p]
        for k in range(0, 61, 2):
            space = miller_basis(k, p, basis_precision(k, max(ells)))
            matrices = {ell: hecke_matrix(space, ell) for ell in ells}
            for i, a in enumerate(ells):
                for b in ells[i + 1:]:
                    assert np.array_equal(matrices[a] @ matrices[b], matrices[b] @ matrices[a])


class TestEisensteinEigensystem:
    @pytest.mark.parametrize("name", ["p5_E4", "p5_E6", "p7_E6", "p7_E8"])
    def test_printed_sequences(self, name):
        case = REGRESSION_CASES[name]
        primes = first_primes(11, exclude=case['p'])
        eigensystem = eisenstein_eigensystem(case['k'], case['p'], primes)
        assert tuple(eigensystem.residues()) == case['eigensystem']

    def test_rejects_p(self):
        with pytest.raises(EllEqualsP):
            eisenstein_eigensystem(4, 5, [2, 5])

    def test_agreement(self, f5):
        a = eisenstein_eigensystem(4, 5, [2, 3, 7])
        b = Eigensystem(a.p, ((2, f5(4)), (3, f5(3)), (7, f5(4))), f5)
        assert a.agrees_with(b)
        assert not a.agrees_with(a.restricted([2, 3]))
        assert a.value(3) == 3


class TestDecomposition:
    def test_zero_dimensional(self):
        assert decompose_eigensystems(miller_basis(2, 5, 10), [2, 3]) == []

    def test_s24_mod_5(self):
        primes = [2, 3, 7, 11]
        space = miller_basis(24, 5, basis_precision(24, 11), cuspidal=True)
        record = find_record(decompose_eigensystems(space, primes), (4, 3, 4, 2))
        assert record is not None
        assert record.eigenform[1] == 1
        assert [record.eigenform[n].residue for n in range(1, 8)] == [1, 4, 3, 3, 0, 2, 4]

    def test_s48_mod_7(self):
        primes = [2, 3, 5]
        space = miller_basis(48, 7, basis_precision(48, 5), cuspidal=True)
        record = find_record(decompose_eigensystems(space, primes), (5, 6, 4))
        assert record is not None

    def test_records_are_eigenforms(self):
        primes = [2, 3, 7]
        space = miller_basis(36, 5, basis_precision(36, 7))
        for record in decompose_eigensystems(space, primes):
            if not record.resolved:
                continue
            for ell, value in record.eigensystem.as_pairs():
                assert eigenvalue_of(record.eigenform, ell, 5) == value

    @pytest.mark.parametrize("name", list(REGRESSION_CASES))
    def test_recovers_printed_eigensystem(self, name):
        case = REGRESSION_CASES[name]
        primes = first_primes(11, exclude=case['p'])
        space = miller_basis(case['matched_weight'], case['p'],
                             basis_precision(case['matched_weight'], primes[-1]), cuspidal=True)
        assert find_record(decompose_eigensystems(space, primes), case['eigensystem']) is not None

    def test_degree_cap_one_leaves_unresolved(self):
        # with the cap at 1 no record leaves F_p
        space = miller_basis(24, 7, basis_precision(24, 3), cuspidal=True)
        for record in decompose_eigensystems(space, [2, 3], degree_cap=1):
            assert record.eigensystem.d == 1
            if not record.resolved:
                assert record.reason in ("degree", "multiplicity")

    def test_dimensions_add_up(self):
        for p, k in [(5, 36), (7, 40), (5, 60)]:
            space = miller_basis(k, p, basis_precision(k, 3))
            records = decompose_eigensystems(space, [2, 3])
            assert sum(r.dimension for r in records) == space.dimension

    def test_extension_field_records(self):
        for p in (5, 7):
            for k in range(12, 61, 2):
                space = miller_basis(k, p, basis_precision(k, 3), cuspidal=True)
                for record in decompose_eigensystems(space, [2, 3]):
                    if record.eigensystem.d == 1:
                        continue
                    # only records that genuinely need F_{p^2} keep it
                    coefficients = record.eigenform.coefficients
                    assert np.any(coefficients >= p) or not all(
                        v.in_prime_field() for _, v in record.eigensystem.as_pairs()
                    )
                    if record.resolved:
                        for ell, value in record.eigensystem.as_pairs():
                            assert eigenvalue_of(record.eigenform, ell, p) == value

    def test_non_semisimple_eigenspace_resolves(self):
        # T_l is not semisimple on S_52 mod 7: a 2-dimensional generalized eigenspace holds one eigenform
        primes = primes_up_to(37, exclude=7)
        space = miller_basis(52, 7, basis_precision(52, 37), cuspidal=True)
        records = decompose_eigensystems(space, primes)
        record = find_record(records, (2, 0, 0, 2, 0, 0, 0, 2, 2, 0, 2))
        assert record is not None
        assert record.dimension == 2
        assert record.reason is None
        assert [record.eigenform[n].residue for n in (1, 2, 3, 4, 8, 9, 11)] == [1, 2, 0, 3, 4, 1, 2]
        for ell, value in record.eigensystem.as_pairs():
            assert eigenvalue_of(record.eigenform, ell, 7) == value

    def test_shared_eigensystem_stays_unresolved(self):
        # E_24 and a cusp form share their eigenvalues mod 5
        space = miller_basis(24, 5, basis_precision(24, 7))
        records = decompose_eigensystems(space, [2, 3, 7])
        shared = [r for r in records if r.reason == "multiplicity"]
        assert shared
        assert all(r.dimension >= 2 and not r.resolved for r in shared)
        assert any(r.eigensystem.residues() == [4, 3, 4] for r in shared)

    @pytest.mark.parametrize("p", [5, 7])
    def test_resolved_count_bounded_by_dimension(self, p):
        primes = [2, 3]
        distinct_cases = 0
        for k in range(12, 61, 2):
            space = miller_basis(k, p, basis_precision(k, 3), cuspidal=True)
            resolved = [r for r in decompose_eigensystems(space, primes) if r.resolved]
            assert len(resolved) <= space.dimension
            for ell in primes:
                roots = find_roots(charpoly(space.field, hecke_matrix(space, ell).entries), space.field)
                if len(roots) == space.dimension:
                    distinct_cases += 1
                    assert len(resolved) == space.dimension
                    break
        assert distinct_cases > 0


def test_basis_precision():
    assert basis_precision(24, 37) == 37 * 4 + 1
