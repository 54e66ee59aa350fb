"""
Putcurve 테스트 (Pytest)

핵심 로직:
- classify_put() 𝓛 / 𝓜 분류 (볼록 껍질 경로 == 정의 그대로의 기준 구현)
- construct_put_curve() case 선택과 곡선
- detect_put_divergence() 원점 발산
- filter_anomalies() 이상 호가 제외
- 차익거래 없는 합성 체인에서 곡선 성질 (원점 0, 기울기 ≤ D, 호가 범위)
- 호가를 망가뜨린 체인에서도 비감소 / 볼록 유지
"""
from decimal import Decimal
from fractions import Fraction
from types import SimpleNamespace

import pytest

from apps.arbitrage.utils import check_necessary_conditions
from apps.core.exceptions import FilterFailureError, PreconditionError
from apps.core.models import INVERSE_K_AT_ORIGIN, POSITIVE_AT_ORIGIN
from apps.core.synthetic import corrupt_chain, point_mass_market
from apps.putcurve.models import CaseTaken
from apps.putcurve.utils import (
    anomalous_strikes,
    build_f0_for_M,
    classify_put,
    classify_put_naive,
    construct_put_curve,
    detect_put_divergence,
    filter_anomalies,
    lower_hull,
    verify_put_postconditions,
)
from apps.pwl.models import Line
from apps.pwl.utils import upper_envelope


class TestLowerHull:

    def test_collinear_points_dropped(self):
        points = [(0, 0), (1, 1), (2, 2), (3, 5)]
        assert lower_hull(points) == [0, 2, 3]

    def test_point_above_chord_dropped(self):
        points = [(10, 2), (20, 4), (30, 5)]
        assert lower_hull(points) == [0, 2]


class TestClassifyPut:
    """행사가 (10, 20, 30) 예제"""

    def test_example_members(self, example_put_chain):
        classification = classify_put(example_put_chain, 1)

        assert set(classification.L_members) == {(1, 2), (2, 3)}
        assert set(classification.M_members) == {(2, 3)}
        assert (classification.I_L, classification.J_L) == (1, 3)
        assert (classification.I_M, classification.J_M) == (2, 3)

    def test_example_lines(self, example_put_chain):
        classification = classify_put(example_put_chain, 1)

        assert classification.L_members[(1, 2)] == Line(Fraction(1, 5), -1)
        assert classification.M_members[(2, 3)] == Line(Fraction(3, 10), -3)
        assert classification.M_members[(2, 3)].tag == 'f_2,3'

    def test_boundary_lines(self, example_put_chain):
        """f^D = K − 24 (J = 3), g^D = K − 9.5 (I = 1)"""
        classification = classify_put(example_put_chain, 1)

        assert classification.fD == Line(1, -24)
        assert classification.fD_index == 3
        assert classification.gD == Line(1, Fraction(-19, 2))
        assert classification.gD_index == 1

    def test_matches_naive(self, example_put_chain, anomaly_snapshot):
        for chain in (example_put_chain, anomaly_snapshot.put_chain):
            assert classify_put(chain, 1) == classify_put_naive(chain, 1)

    def test_matches_naive_on_generated_chains(self, rng):
        """합성 체인 200개: 볼록 껍질 경로 == O(N³) 정의"""
        for _ in range(200):
            snapshot = point_mass_market(rng, int(rng.integers(1, 16)))
            chain, discount = snapshot.put_chain, snapshot.discount
            assert classify_put(chain, discount) == classify_put_naive(chain, discount)

    def test_empty_chain(self, make_chain):
        with pytest.raises(PreconditionError):
            classify_put(make_chain('P', []), 1)

    def test_f0_needs_m_members(self, single_quote_snapshot):
        chain = single_quote_snapshot.put_chain
        with pytest.raises(PreconditionError):
            build_f0_for_M(chain, classify_put(chain, 1))


class TestConstructPutCurve:

    def test_example_curve(self, example_put_chain):
        """p = max(0, 0.25K − 2, 0.3K − 3, K − 24)"""
        result = construct_put_curve(example_put_chain, 1)

        assert result.case_taken == CaseTaken.M_CLASS
        assert result.f0 == Line(Fraction(1, 4), -2)
        assert result.curve.breakpoints == [8, 20, 30]
        assert [result.curve(k) for k in (10, 20, 30)] == [Fraction(1, 2), 3, 6]
        assert result.curve(0) == 0
        assert not result.diverges

    def test_example_postconditions(self, example_put_chain):
        result = construct_put_curve(example_put_chain, 1)
        assert verify_put_postconditions(result, example_put_chain, 1) == []

    def test_l_class_with_first_index(self, term_snapshots):
        """I^𝓛 = 1 이면 f₀ 없이 max(𝓛 ∪ {f^D, 0})"""
        chain = term_snapshots[1].put_chain
        result = construct_put_curve(chain, 1)

        assert result.case_taken == CaseTaken.L_CLASS
        assert result.classification.I_L == 1
        assert not result.classification.M_members
        assert result.f0 is None
        assert verify_put_postconditions(result, chain, 1) == []

    def test_single_quote_uses_g_d(self, make_chain):
        """(100, 5, 5) 하나 → max(0, K − 95)"""
        chain = make_chain('P', [('100', '5', '5')])
        result = construct_put_curve(chain, 1)

        assert result.case_taken == CaseTaken.FALLBACK_GD
        assert result.curve.breakpoints == [95]
        assert result.curve(100) == 5

    def test_fallback_f1(self, make_chain):
        chain = make_chain('P', [('10', '1', '2'), ('20', '3', '4')])
        result = construct_put_curve(chain, 1)

        assert result.case_taken == CaseTaken.FALLBACK_F1
        assert result.curve(10) == 1
        assert result.curve(20) == 4
        assert result.curve(0) == 0

    def test_fallback_f1_f2(self, make_chain):
        chain = make_chain('P', [('10', '1', '2'), ('20', '3', '4'), ('30', '15', '16')])
        result = construct_put_curve(chain, 1)

        assert result.case_taken == CaseTaken.FALLBACK_F1_F2
        assert result.curve(20) == 4
        assert result.curve(30) == 15

    def test_decreasing_f1_flattened(self, make_chain):
        """f1 기울기 −0.1 → (20, 2) 를 지나는 수평선. 곡선은 상수 2 로 비감소"""
        chain = make_chain('P', [('10', '3', '3'), ('20', '1', '2')])
        result = construct_put_curve(chain, 1)

        assert result.case_taken == CaseTaken.FALLBACK_F1
        assert [result.curve(k) for k in (0, 10, 20, 50)] == [2, 2, 2, 2]
        assert result.divergence.reason == POSITIVE_AT_ORIGIN
        assert result.divergence.line_tag == 'f1'
        assert verify_put_postconditions(result, chain, 1) == ['a', 'c']

    def test_positive_f0_diverges(self, anomaly_snapshot):
        """1475 의 매수호가 때문에 f₀ = 0.05 (상수)"""
        result = construct_put_curve(anomaly_snapshot.put_chain, 1)

        assert result.classification.I_M == 4
        assert result.f0 == Line(0, Fraction(1, 20))
        assert result.diverges
        assert result.divergence.reason == POSITIVE_AT_ORIGIN
        assert result.divergence.line_tag == 'f0'


class TestDetectPutDivergence:

    @pytest.mark.parametrize("line,reason", [
        (Line(Fraction(1, 100), 0, 'x'), INVERSE_K_AT_ORIGIN),
        (Line(0, Fraction(1, 20), 'x'), POSITIVE_AT_ORIGIN),
    ])
    def test_lines_through_origin(self, line, reason):
        result = SimpleNamespace(curve=upper_envelope([line], include_zero=True))
        report = detect_put_divergence(result)

        assert report.diverges
        assert report.reason == reason
        assert report.line_tag == 'x'

    def test_negative_intercept_converges(self):
        result = SimpleNamespace(curve=upper_envelope([Line(1, -5)], include_zero=True))
        assert not detect_put_divergence(result).diverges


class TestFilterAnomalies:

    def test_single_exclusion(self, anomaly_snapshot):
        outcome = filter_anomalies(anomaly_snapshot.put_chain, 1)

        assert outcome.excluded_strikes == (Decimal('1475'),)
        assert outcome.iterations == 1
        assert outcome.result.f0 == Line(Fraction(1, 2000), Fraction(-7, 10))
        assert not outcome.result.diverges
        assert outcome.result.excluded_strikes == (Decimal('1475'),)

    def test_variant_excludes_three(self, anomaly_variant_snapshot):
        """1400, 1450 매수호가도 0.05 → 세 호가가 한 번에 빠지고 I^𝓜 은 1550 으로"""
        outcome = filter_anomalies(anomaly_variant_snapshot.put_chain, 1)

        assert outcome.excluded_strikes == (Decimal('1400'), Decimal('1450'), Decimal('1475'))
        assert outcome.iterations == 1
        classification = outcome.result.classification
        assert outcome.chain.strike_at(classification.I_M) == Decimal('1550')
        assert outcome.result.f0 == Line(Fraction(1, 500), Fraction(-59, 20))

    def test_anomalous_strikes(self, anomaly_snapshot):
        chain = anomaly_snapshot.put_chain
        assert anomalous_strikes(chain, classify_put(chain, 1)) == [Decimal('1475')]

    def test_no_violation_no_exclusion(self, example_put_chain):
        outcome = filter_anomalies(example_put_chain, 1)
        assert outcome.excluded_strikes == ()
        assert outcome.iterations == 0
        assert outcome.chain == example_put_chain

    def test_empty_m_rejected(self, single_quote_snapshot):
        with pytest.raises(PreconditionError):
            filter_anomalies(single_quote_snapshot.put_chain, 1)

    def test_iteration_limit(self, anomaly_snapshot):
        """한도 0 → 부분 결과와 함께 실패"""
        with pytest.raises(FilterFailureError) as exc_info:
            filter_anomalies(anomaly_snapshot.put_chain, 1, max_iterations=0)

        assert exc_info.value.iterations == 0
        assert exc_info.value.excluded_strikes == ()
        assert exc_info.value.chain == anomaly_snapshot.put_chain


class TestArbitrageFreeChains:
    """점질량 분포로 만든 차익거래 없는 체인"""

    def test_postconditions_hold(self, rng):
        for _ in range(1000):
            snapshot = point_mass_market(rng, int(rng.integers(1, 51)))
            chain, discount = snapshot.put_chain, snapshot.discount

            assert check_necessary_conditions(chain, discount) == []
            result = construct_put_curve(chain, discount)
            failed = verify_put_postconditions(result, chain, discount)
            assert failed == [], f"{result.case_taken}: {failed} 성질 실패"
            assert not result.diverges

    def test_m_within_l(self, rng):
        """차익거래가 없으면 𝓜 ⊆ 𝓛"""
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            classification = classify_put(snapshot.put_chain, snapshot.discount)
            assert set(classification.M_members) <= set(classification.L_members)

    def test_no_anomalies(self, rng):
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            chain = snapshot.put_chain
            assert anomalous_strikes(chain, classify_put(chain, snapshot.discount)) == []

    def test_slopes_ordered_by_first_index(self, rng):
        """𝓛 의 두 직선 f_{i,j}, f_{k,l} 에서 i < k 이면 기울기도 순서대로"""
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            members = classify_put(snapshot.put_chain, snapshot.discount).L_members
            for (i, _), left in members.items():
                for (k, _), right in members.items():
                    if i < k:
                        assert left.slope <= right.slope

    def test_f_d_at_last_l_index(self, rng):
        """f^D 는 J^𝓛 의 매도호가를 지나는 기울기 D 직선"""
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            chain = snapshot.put_chain
            classification = classify_put(chain, snapshot.discount)
            if not classification.L_members:
                continue

            discount = Fraction(snapshot.discount)
            j = classification.J_L - 1
            assert classification.fD == Line(discount, chain.asks[j] - discount * chain.strikes[j])


class TestCorruptedChains:
    """호가 몇 개를 망가뜨린 체인 (차익거래 위반 포함)"""

    def test_curve_non_decreasing_and_convex(self, rng):
        """호가 범위나 원점 0 은 깨질 수 있어도 비감소 / 볼록은 항상 유지"""
        for _ in range(500):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            chain = corrupt_chain(rng, snapshot.put_chain, int(rng.integers(1, 4)))
            result = construct_put_curve(chain, snapshot.discount)
            failed = verify_put_postconditions(result, chain, snapshot.discount)

            assert 'monotone' not in failed, f"{result.case_taken}: 감소 구간 {result.curve.slopes}"
            assert 'convex' not in failed, f"{result.case_taken}: 볼록 실패"

    def test_slopes_ordered_by_first_index(self, rng):
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            chain = corrupt_chain(rng, snapshot.put_chain, int(rng.integers(1, 4)))
            members = classify_put(chain, snapshot.discount).L_members
            for (i, _), left in members.items():
                for (k, _), right in members.items():
                    if i < k:
                        assert left.slope <= right.slope

    def test_f_d_at_last_l_index(self, rng):
        for _ in range(300):
            snapshot = point_mass_market(rng, int(rng.integers(2, 31)))
            chain = corrupt_chain(rng, snapshot.put_chain, int(rng.integers(1, 4)))
            classification = classify_put(chain, snapshot.discount)
            if not classification.L_members:
                continue

            discount = Fraction(snapshot.discount)
            j = classification.J_L - 1
            assert classification.fD == Line(discount, chain.asks[j] - discount * chain.strikes[j])
