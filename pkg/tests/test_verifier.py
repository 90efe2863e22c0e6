import pytest

from mmfp.hecke import eigenvalue_of
from mmfp.qseries import delta_qexp, eisenstein_qexp
from mmfp.regression_fixtures import REGRESSION_CASES, expected_coefficients
from mmfp.utils.errors import (
    InsufficientPrecision,
    InvalidInput,
    NotAnEigenform,
    NotPrime,
    Unsupported,
)
from mmfp.verifier import (
    SourceDescriptor,
    corollary_sweep,
    parse_source,
    prime_list,
    regression_examples,
    verify_theorem,
    weight_shift,
    weight_shift_sweep,
)


def leading(f, count):
    return [f[n].residue for n in range(1, count + 1)]


class TestSourceDescriptor:
    @pytest.mark.parametrize("text,label,weight", [
        ("eisenstein:4", "eisenstein:4", 4),
        ("delta", "delta", 12),
        ("one", "one", 0),
        (" eisenstein:12 ", "eisenstein:12", 12),
    ])
    def test_parse(self, text, label, weight):
        source = parse_source(text)
        assert source.label == label
        assert source.weight == weight

    @pytest.mark.parametrize("text", ["eisenstein:x", "eisenstein:2", "eisenstein:5", "theta", "file"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidInput):
            parse_source(text)

    def test_explicit_label(self):
        source = SourceDescriptor.explicit(delta_qexp(5, 10), "delta.json")
        assert source.label == "series:delta.json:weight=12"
        assert source.qexp(5, 4).precision == 4

    def test_explicit_wrong_characteristic(self):
        source = SourceDescriptor.explicit(delta_qexp(5, 10))
        with pytest.raises(InvalidInput):
            source.qexp(7, 10)


class TestPrimeList:
    def test_excludes_p(self):
        assert prime_list(5, 13) == [2, 3, 7, 11, 13]

    def test_default_bound(self):
        assert prime_list(7)[-1] == 37

    def test_empty(self):
        with pytest.raises(InvalidInput):
            prime_list(5, 1)


class TestVerifyTheorem:
    def test_e4_mod_5(self):
        verdict = verify_theorem(5, SourceDescriptor.eisenstein(4), 37)
        assert verdict.filtration == 0
        assert verdict.matched_weight == 24
        assert verdict.shift == weight_shift(5) == 24
        assert not verdict.source_is_cuspidal
        assert leading(verdict.matched.eigenform, 7) == [1, 4, 3, 3, 0, 2, 4]
        assert leading(verdict.matched.eigenform, 37) == expected_coefficients("p5_E4")
        assert verdict.primes == (2, 3, 7, 11, 13, 17, 19, 23, 29, 31, 37)

    def test_e6_mod_7(self):
        verdict = verify_theorem(7, SourceDescriptor.eisenstein(6), 37)
        assert verdict.filtration == 0
        assert verdict.matched_weight == 48
        assert leading(verdict.matched.eigenform, 5) == [1, 5, 6, 0, 4]

    def test_delta_matches_itself(self):
        verdict = verify_theorem(5, SourceDescriptor.delta(), 13)
        assert verdict.filtration == 12
        assert verdict.source_is_cuspidal
        assert verdict.matched_weight == 12
        assert verdict.matched.eigenform.agrees_with(delta_qexp(5, verdict.matched.eigenform.precision))

    def test_constant_shares_the_e4_eigensystem(self):
        # 1 and E_4 have the same eigenvalues 1 + l^{-1} mod 5
        verdict = verify_theorem(5, SourceDescriptor.one(), 13)
        assert verdict.filtration == 0
        assert verdict.matched_weight == 24
        assert leading(verdict.matched.eigenform, 4) == [1, 4, 3, 3]

    def test_eigensystem_values(self):
        verdict = verify_theorem(7, SourceDescriptor.eisenstein(8), 13)
        for ell, value in verdict.eigensystem.as_pairs():
            assert value == 1 + ell ** 7
            assert eigenvalue_of(verdict.matched.eigenform, ell, 7) == value

    @pytest.mark.parametrize("p", [2, 3])
    def test_small_characteristic_unsupported(self, p):
        with pytest.raises(Unsupported):
            verify_theorem(p, SourceDescriptor.delta(), 13)

    def test_composite_characteristic(self):
        with pytest.raises(NotPrime):
            verify_theorem(9, SourceDescriptor.delta(), 13)

    def test_not_an_eigenform(self):
        # E_4^3 + 2 Delta = E_12 + Delta mod 7
        f = eisenstein_qexp(4, 7, 60) ** 3 + delta_qexp(7, 60).scale(2)
        with pytest.raises(NotAnEigenform):
            verify_theorem(7, SourceDescriptor.explicit(f, "mixed"), 13)

    def test_short_explicit_series(self):
        with pytest.raises(InsufficientPrecision):
            verify_theorem(5, SourceDescriptor.explicit(delta_qexp(5, 5), "short"), 13)

    def test_deterministic(self):
        a = verify_theorem(7, SourceDescriptor.eisenstein(4), 13)
        b = verify_theorem(7, SourceDescriptor.eisenstein(4), 13)
        assert a.matched_weight == b.matched_weight
        assert a.matched.eigenform == b.matched.eigenform
        assert a.eigensystem.residues() == b.eigensystem.residues()

    def test_cache_does_not_change_the_verdict(self, basis_cache):
        plain = verify_theorem(5, SourceDescriptor.eisenstein(6), 13)
        cached = verify_theorem(5, SourceDescriptor.eisenstein(6), 13, basis_cache)
        again = verify_theorem(5, SourceDescriptor.eisenstein(6), 13, basis_cache)
        assert plain.matched.eigenform == cached.matched.eigenform == again.matched.eigenform
        assert plain.matched_weight == cached.matched_weight == again.matched_weight == 30


class TestCorollarySweep:
    def test_delta_mod_5(self):
        report = corollary_sweep(5, 12, 13)
        assert report.ok
        assert any(e.weight == 12 and e.filtration == 12 and e.cuspidal for e in report.entries)

    def test_e8_mod_7(self):
        report = corollary_sweep(7, 8, 13)
        assert report.ok
        entry = next(e for e in report.entries if e.weight == 8)
        assert entry.eigenform_id == "M8.0"
        assert entry.filtration == 8
        assert not entry.cuspidal

    def test_constant_mod_5(self):
        report = corollary_sweep(5, 0, 13)
        assert report.ok
        assert len(report.entries) == 1
        entry = report.entries[0]
        assert (entry.weight, entry.filtration, entry.cuspidal) == (0, 0, False)
        assert entry.description.startswith("1 + O(q")

    def test_unsupported(self):
        with pytest.raises(Unsupported):
            corollary_sweep(3, 12, 13)

    @pytest.mark.slow
    @pytest.mark.parametrize("p", [5, 7])
    def test_no_violations_to_weight_40(self, p):
        report = corollary_sweep(p, 40, 13)
        assert report.violations == ()
        assert all(e.cuspidal for e in report.entries if e.filtration > p + 1)


@pytest.mark.slow
@pytest.mark.parametrize("p", [5, 7])
def test_weight_shift_law(p):
    report = weight_shift_sweep(p, 40, 13)
    assert report.ok, report.failures
    assert report.verdicts
    for verdict in report.verdicts:
        assert verdict.shift in (0, p * p - 1)
        assert (verdict.shift == 0) == verdict.source_is_cuspidal


class TestRegression:
    def test_all_cases_pass(self):
        report = regression_examples()
        assert [r.name for r in report.results] == list(REGRESSION_CASES)
        assert report.passed, [(r.name, r.error, r.coefficient_diffs, r.eigensystem_diffs) for r in report.failures]

    def test_records_filtrations(self):
        report = regression_examples()
        for result in report.results:
            case = REGRESSION_CASES[result.name]
            assert result.filtration == case['filtration']
            assert result.matched_weight == case['matched_weight']
