"""
Benchmark 테스트 (Pytest)

핵심 로직:
- estimate_forward() 풋-콜 패리티
- select_eligible() K★ 와 0 매수호가 중단 규칙
- riemann_variance() 리만 합
- benchmark_index() 실패 단계 보고와 보간
"""
from dataclasses import replace
from decimal import Decimal
from fractions import Fraction

import pytest

from apps.benchmark.models import (
    BENCHMARK_INCALCULABLE,
    FORWARD_INESTIMABLE,
    BenchmarkConfig,
    EligibleQuote,
)
from apps.benchmark.utils import (
    benchmark_index,
    benchmark_variance,
    estimate_forward,
    relative_divergence,
    riemann_variance,
    select_eligible,
)
from apps.core.exceptions import BenchmarkFailure, DegenerateMaturityError, PreconditionError
from apps.core.synthetic import lognormal_market
from apps.quotes.models import MarketSnapshot
from apps.quotes.utils import parse_snapshot, serialize_snapshots
from apps.varindex.utils import proposed_index


@pytest.fixture
def make_snapshot(make_chain):
    def factory(puts, calls, discount='1', label='bench', maturity='0.1'):
        return MarketSnapshot(
            label=label,
            maturity=Decimal(maturity),
            discount=Decimal(discount),
            put_chain=make_chain('P', puts),
            call_chain=make_chain('C', calls),
        )
    return factory


class TestEstimateForward:

    def test_parity_at_equality(self, make_snapshot):
        snapshot = make_snapshot([('100', '1', '3')], [('100', '1', '3')])
        assert estimate_forward(snapshot) == (100, Decimal('100'))

    def test_discounted_parity(self, make_snapshot):
        """K̂ = 100, C_mid − P_mid = 2, D = 0.5 → F₀ = 104"""
        snapshot = make_snapshot([('100', '1', '3')], [('100', '3', '5')], discount='0.5')
        forward, strike = estimate_forward(snapshot)
        assert forward == 104
        assert strike == Decimal('100')

    def test_tie_goes_to_lower_strike(self, make_snapshot):
        snapshot = make_snapshot(
            [('90', '1', '2'), ('110', '11', '12')],
            [('90', '11', '12'), ('110', '1', '2')],
        )
        _, strike = estimate_forward(snapshot)
        assert strike == Decimal('90')

    def test_disjoint_strikes(self, make_snapshot):
        snapshot = make_snapshot([('90', '1', '2')], [('110', '1', '2')])
        with pytest.raises(BenchmarkFailure) as exc_info:
            estimate_forward(snapshot)

        assert exc_info.value.reason == FORWARD_INESTIMABLE
        assert exc_info.value.stage == 'estimate_forward'


class TestSelectEligible:

    def test_zero_bid_pattern(self, make_snapshot):
        """바깥쪽으로 (양, 0, 양, 0, 0, 양) → 1, 3 번째만 남고 6 번째는 보지 않음"""
        puts = [
            ('94', '0.1', '0.2'),
            ('95', '0', '0.2'),
            ('96', '0', '0.2'),
            ('97', '0.3', '0.4'),
            ('98', '0', '0.5'),
            ('99', '0.5', '0.6'),
            ('100', '1', '2'),
        ]
        snapshot = make_snapshot(puts, [('100', '1', '2'), ('101', '0.5', '0.6')])
        k_star, eligible = select_eligible(snapshot, 100)

        assert k_star == Decimal('100')
        assert [q.strike for q in eligible] == [Decimal('97'), Decimal('99'), Decimal('100'), Decimal('101')]
        assert [q.side for q in eligible] == ['P', 'P', 'P/C', 'C']
        assert [q.delta_k for q in eligible] == [2, Fraction(3, 2), 1, 1]
        assert eligible[2].mid == Fraction(3, 2)

    def test_all_bids_positive(self, make_snapshot):
        puts = [('80', '1', '2'), ('90', '2', '3'), ('100', '4', '5')]
        calls = [('100', '4', '5'), ('110', '2', '3'), ('120', '1', '2')]
        _, eligible = select_eligible(make_snapshot(puts, calls), 100)
        assert len(eligible) == 5

    def test_k_star_below_forward(self, make_snapshot):
        puts = [('90', '1', '2'), ('100', '4', '5')]
        calls = [('90', '11', '12'), ('100', '5', '6'), ('110', '1', '2')]
        k_star, _ = select_eligible(make_snapshot(puts, calls), Fraction(1015, 10))
        assert k_star == Decimal('100')

    def test_no_strike_below_forward(self, make_snapshot):
        snapshot = make_snapshot([('100', '1', '2')], [('100', '1', '2')])
        with pytest.raises(BenchmarkFailure):
            select_eligible(snapshot, 50)

    def test_empty_call_wing(self, term_snapshots):
        """K★ = 2600 바로 위 콜 2605, 2610 이 연속 0 매수호가 → 계산 불가"""
        snapshot = term_snapshots[1]
        forward, _ = estimate_forward(snapshot)
        assert forward == 2601

        with pytest.raises(BenchmarkFailure) as exc_info:
            select_eligible(snapshot, forward)
        assert exc_info.value.reason == BENCHMARK_INCALCULABLE
        assert exc_info.value.stage == 'select_eligible'

    def test_larger_zero_bid_limit(self, term_snapshots):
        """한도를 크게 잡으면 2720 콜까지 닿는다"""
        snapshot = term_snapshots[1]
        _, eligible = select_eligible(snapshot, 2601, BenchmarkConfig(consecutive_zero_bid_limit=30))
        assert [q.strike for q in eligible if q.side == 'C'] == [Decimal('2720')]

    def test_config_limit_must_be_positive(self):
        with pytest.raises(PreconditionError):
            BenchmarkConfig(consecutive_zero_bid_limit=0)

    def test_independent_of_row_order(self, rng):
        """CSV 행 순서를 섞어도 K★ 와 합산 대상이 같음"""
        text = serialize_snapshots([lognormal_market(label='shuffled', days=30)])
        header, *rows = text.splitlines()
        expected_snapshot = parse_snapshot(text)[0]
        expected = select_eligible(expected_snapshot, estimate_forward(expected_snapshot)[0])

        for _ in range(5):
            shuffled = '\n'.join([header] + [rows[i] for i in rng.permutation(len(rows))]) + '\n'
            snapshot = parse_snapshot(shuffled)[0]
            assert select_eligible(snapshot, estimate_forward(snapshot)[0]) == expected


class TestRiemannVariance:

    def test_single_put(self):
        """2·(1·5/2500) − 0 = 0.004"""
        quote = EligibleQuote(strike=Decimal('50'), mid=Fraction(1), delta_k=Fraction(5), side='P')
        assert riemann_variance([quote], 55, Decimal('55'), 1) == Fraction(1, 250)

    def test_forward_adjustment(self):
        quote = EligibleQuote(strike=Decimal('50'), mid=Fraction(1), delta_k=Fraction(5), side='P')
        value = riemann_variance([quote], Fraction(121, 2), Decimal('55'), 1)
        assert value == Fraction(1, 250) - Fraction(1, 100)

    @pytest.mark.parametrize("days", [9, 30, 65])
    def test_dropping_outer_quote_never_increases(self, days):
        """나머지 ΔK 를 그대로 두고 가장 바깥 풋/콜을 빼면 V 는 늘지 않음 (항이 모두 0 이상)"""
        snapshot = lognormal_market(label='wings', days=days)
        forward, _ = estimate_forward(snapshot)
        k_star, eligible = select_eligible(snapshot, forward)
        full = riemann_variance(eligible, forward, k_star, snapshot.discount)

        for trimmed in (eligible[1:], eligible[:-1], eligible[2:-2]):
            assert riemann_variance(trimmed, forward, k_star, snapshot.discount) <= full


class TestBenchmarkIndex:

    def test_fails_on_zero_bid_wing(self, term_snapshots):
        result = benchmark_index(*term_snapshots, target_days=30)

        assert result.failed
        assert result.index_level is None
        assert result.failed_reason == BENCHMARK_INCALCULABLE
        assert result.failed_stage == 'select_eligible'
        assert result.failed_label == 'next'
        assert [r.label for r in result.results] == ['near']

    def test_near_maturity_succeeds(self, term_snapshots):
        result = benchmark_variance(term_snapshots[0])
        assert result.forward == 2601
        assert result.k_star == Decimal('2600')
        assert result.total_variance > 0

    def test_equal_maturities(self, example_snapshot):
        with pytest.raises(DegenerateMaturityError):
            benchmark_index(example_snapshot, replace(example_snapshot, label='twin'))

    def test_lognormal_market(self):
        """조밀한 로그정규 시장: 벤치마크는 σ 를 2.5% 안에서 복원하고 제안 지수를 넘지 않음"""
        snapshots = [
            lognormal_market(label='near', days=23),
            lognormal_market(label='far', days=37),
        ]
        benchmark = benchmark_index(*snapshots, target_days=30)
        proposed = proposed_index(snapshots, target_days=30)

        assert not benchmark.failed
        assert benchmark.index_level == pytest.approx(20.0, rel=0.025)
        assert benchmark.index_level <= proposed.index_level + 1e-6

    def test_as_dict_on_failure(self, term_snapshots):
        document = benchmark_index(*term_snapshots, target_days=30).as_dict()
        assert document['failed_stage'] == 'select_eligible'
        assert document['index'] is None
        assert len(document['maturities']) == 1


class TestRelativeDivergence:

    @pytest.mark.parametrize("proposed,benchmark,expected", [
        (22.0, 20.0, pytest.approx(0.1)),
        (20.0, 20.0, 0.0),
        (None, 20.0, None),
        (20.0, None, None),
        (20.0, 0, None),
    ])
    def test_values(self, proposed, benchmark, expected):
        assert relative_divergence(proposed, benchmark) == expected
