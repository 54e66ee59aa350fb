"""
Cboe 방식 벤치마크 (비교용)

1. estimate_forward: 풋-콜 패리티로 F₀
2. select_eligible: K★ 와 외가격 호가 선택 (연속 0 매수호가에서 중단)
3. riemann_variance: V(T) = (2/D)·Σ Q(K)ΔK/K² − (F₀/K★ − 1)²
4. benchmark_index: 두 만기 보간 (varindex 와 같은 규약)

계산은 Fraction 으로 정확하게 하고, 보간/연율화만 float.
"""
import logging

from apps.core.exceptions import BenchmarkFailure, DegenerateMaturityError
from apps.core.utils import resolve_setting, to_fraction
from apps.varindex.utils import annualized_index, interpolate_variance
from .models import (
    BENCHMARK_INCALCULABLE,
    FORWARD_INESTIMABLE,
    BenchmarkConfig,
    BenchmarkIndexResult,
    BenchmarkResult,
    EligibleQuote,
)

logger = logging.getLogger(__name__)


def _mid(quote):
    return (to_fraction(quote.bid) + to_fraction(quote.ask)) / 2


def _common_strikes(snapshot):
    puts = {quote.strike: quote for quote in snapshot.put_chain}
    calls = {quote.strike: quote for quote in snapshot.call_chain}
    return [(strike, puts[strike], calls[strike]) for strike in sorted(puts.keys() & calls.keys())]


def estimate_forward(snapshot):
    """
    F₀ = K̂ + (C_mid(K̂) − P_mid(K̂)) / D

    K̂ 는 공통 행사가 중 |C_mid − P_mid| 최소 (동률이면 낮은 행사가).

    Returns:
        tuple: (F₀, K̂)

    Raises:
        BenchmarkFailure: 공통 행사가 없음
    """
    common = _common_strikes(snapshot)
    if not common:
        raise BenchmarkFailure(FORWARD_INESTIMABLE, stage='estimate_forward')

    discount = to_fraction(snapshot.discount)
    strike, put, call = min(common, key=lambda row: abs(_mid(row[2]) - _mid(row[1])))
    forward = to_fraction(strike) + (_mid(call) - _mid(put)) / discount

    logger.debug(f"[{snapshot.label}] F0 = {float(forward):.6f} (K̂ = {strike})")
    return forward, strike


def _scan_wing(quotes, limit):
    """바깥쪽으로 훑으며 0 매수호가는 빼고, limit 개 연속 0 매수호가에서 멈춤"""
    retained = []
    zeros = 0
    for quote in quotes:
        if quote.bid == 0:
            zeros += 1
            if zeros >= limit:
                break
            continue
        zeros = 0
        retained.append(quote)
    return retained


def _delta_ks(strikes):
    """내부는 이웃 간격의 절반, 양 끝은 한쪽 간격 전체"""
    if len(strikes) == 1:
        return [0]
    deltas = []
    for k in range(len(strikes)):
        if k == 0:
            deltas.append(strikes[1] - strikes[0])
        elif k == len(strikes) - 1:
            deltas.append(strikes[-1] - strikes[-2])
        else:
            deltas.append((strikes[k + 1] - strikes[k - 1]) / 2)
    return deltas


def select_eligible(snapshot, forward, config=None):
    """
    K★ 와 합산 대상 호가

    K★ = F₀ 이하인 가장 큰 공통 행사가. 풋은 K★ 아래를 내림차순, 콜은 위를 오름차순으로 훑는다.
    K★ 에서는 풋/콜 중간가 평균을 쓴다.

    Returns:
        tuple: (K★, tuple[EligibleQuote])

    Raises:
        BenchmarkFailure: K★ 가 없거나 한쪽 날개가 비었음 ('benchmark incalculable')
    """
    config = config or BenchmarkConfig.from_settings()
    forward = to_fraction(forward)

    candidates = [row for row in _common_strikes(snapshot) if to_fraction(row[0]) <= forward]
    if not candidates:
        raise BenchmarkFailure(BENCHMARK_INCALCULABLE, stage='select_eligible')
    k_star, put_at, call_at = candidates[-1]

    limit = config.consecutive_zero_bid_limit
    put_wing = _scan_wing(
        [q for q in reversed(snapshot.put_chain.quotes) if q.strike < k_star], limit,
    )
    call_wing = _scan_wing(
        [q for q in snapshot.call_chain.quotes if q.strike > k_star], limit,
    )
    if not put_wing or not call_wing:
        empty = 'put' if not put_wing else 'call'
        logger.info(f"[{snapshot.label}] {empty} 날개에 남은 호가가 없어 벤치마크 계산 불가")
        raise BenchmarkFailure(BENCHMARK_INCALCULABLE, stage='select_eligible')

    rows = (
        [(q.strike, _mid(q), 'P') for q in reversed(put_wing)]
        + [(k_star, (_mid(put_at) + _mid(call_at)) / 2, 'P/C')]
        + [(q.strike, _mid(q), 'C') for q in call_wing]
    )
    deltas = _delta_ks([to_fraction(strike) for strike, _, _ in rows])

    eligible = tuple(
        EligibleQuote(strike=strike, mid=mid, delta_k=delta, side=side)
        for (strike, mid, side), delta in zip(rows, deltas)
    )
    return k_star, eligible


def riemann_variance(eligible, forward, k_star, discount):
    """
    V(T) = (2/D)·Σ Q(K)·ΔK / K² − (F₀/K★ − 1)²

    Returns:
        Fraction
    """
    discount = to_fraction(discount)
    total = sum(
        (quote.mid * to_fraction(quote.delta_k) / to_fraction(quote.strike) ** 2 for quote in eligible),
        0,
    )
    adjustment = (to_fraction(forward) / to_fraction(k_star) - 1) ** 2
    return 2 * total / discount - adjustment


def benchmark_variance(snapshot, config=None):
    """
    만기 하나의 벤치마크 V(T)

    Raises:
        BenchmarkFailure: 실패 단계 이름 포함
    """
    forward, parity_strike = estimate_forward(snapshot)
    k_star, eligible = select_eligible(snapshot, forward, config)
    variance = riemann_variance(eligible, forward, k_star, snapshot.discount)

    return BenchmarkResult(
        label=snapshot.label,
        maturity=snapshot.maturity,
        forward=forward,
        parity_strike=parity_strike,
        k_star=k_star,
        eligible=eligible,
        total_variance=variance,
    )


def benchmark_index(snapshot1, snapshot2, target_days=None, config=None, mode=None):
    """
    두 만기 벤치마크 지수

    단계 실패는 예외 대신 결과의 failed_* 로 돌려준다.

    Raises:
        DegenerateMaturityError: 두 만기가 같음
    """
    target_days = resolve_setting(target_days, 'TARGET_DAYS')
    if snapshot1.maturity == snapshot2.maturity:
        raise DegenerateMaturityError(
            f"두 스냅샷({snapshot1.label}, {snapshot2.label})의 만기가 같습니다."
        )

    results = []
    for snapshot in sorted((snapshot1, snapshot2), key=lambda s: s.maturity):
        try:
            results.append(benchmark_variance(snapshot, config))
        except BenchmarkFailure as e:
            logger.info(f"[{snapshot.label}] 벤치마크 실패 - {e.stage}: {e.reason}")
            return BenchmarkIndexResult(
                target_days=target_days,
                results=tuple(results),
                failed_reason=e.reason,
                failed_stage=e.stage,
                failed_label=snapshot.label,
            )

    near, far = results
    v_star, t_star, extrapolated = interpolate_variance(
        near.maturity, float(near.total_variance),
        far.maturity, float(far.total_variance),
        target_days=target_days, mode=mode,
    )
    return BenchmarkIndexResult(
        target_days=target_days,
        results=tuple(results),
        interpolated_variance=v_star,
        index_level=annualized_index(v_star, t_star),
        extrapolated=extrapolated,
    )


def relative_divergence(proposed, benchmark):
    """제안 지수 / 벤치마크 지수 − 1 (어느 쪽이든 없으면 None)"""
    if proposed is None or benchmark is None or benchmark == 0:
        return None
    return proposed / benchmark - 1
