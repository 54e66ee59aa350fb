"""
제안 방식 변동성 지수

1. expected_qv: 풋/콜 곡선 → min{p, c} → 닫힌 형식 적분 → 2/D 배
2. interpolate_variance: 두 만기 V(T) 의 선형 보간 (benchmark 와 공유)
3. interpolate_index: 보간 V★ 를 연율화해 지수로
"""
import logging
import math
from fractions import Fraction

from apps.callcurve.utils import construct_call_curve
from apps.core.exceptions import DegenerateMaturityError, FilterFailureError, PreconditionError
from apps.core.models import ExtendedValue
from apps.core.utils import INTERPOLATION_MODES, resolve_setting, to_fraction
from apps.putcurve.utils import construct_put_curve, filter_anomalies
from apps.pwl.utils import integrate_over_k_squared, min_of_curves
from .models import IndexResult, MaturityVariance

logger = logging.getLogger(__name__)

NEGATIVE_VARIANCE = 'negative interpolated variance'


# ========================================
# 1. 만기별 V(T)
# ========================================

def _filtered_put_curve(chain, discount, max_iterations):
    """이상치 필터 적용 (수렴 실패 시 부분 결과로 곡선 구성)"""
    try:
        outcome = filter_anomalies(chain, discount, max_iterations=max_iterations)
    except FilterFailureError as e:
        logger.warning(f"이상치 필터 실패: {e} (제외 {len(e.excluded_strikes)}개까지 적용)")
        result = construct_put_curve(e.chain, discount)
        return result, e.excluded_strikes, e.iterations
    return outcome.result, outcome.excluded_strikes, outcome.iterations


def expected_qv(snapshot, apply_filter=True, max_iterations=None):
    """
    만기 하나의 기대 이차변동 V(T)

    apply_filter 가 켜져 있고 풋 곡선이 발산하며 𝓜 ≠ ∅ 이면 이상치 필터를 먼저 적용한다.
    발산 판정은 풋/콜 곡선 진단을 그대로 따른다 (풋 우선).

    Returns:
        MaturityVariance
    """
    discount = to_fraction(snapshot.discount)

    put_result = construct_put_curve(snapshot.put_chain, discount)
    excluded = ()
    iterations = 0
    if apply_filter and put_result.diverges and put_result.classification.M_members:
        put_result, excluded, iterations = _filtered_put_curve(
            snapshot.put_chain, discount, max_iterations,
        )

    call_result = construct_call_curve(snapshot.call_chain, discount)

    if put_result.diverges:
        total = ExtendedValue.diverged(put_result.divergence.reason, 'put')
    elif call_result.diverges:
        total = ExtendedValue.diverged(call_result.divergence.reason, 'call')
    else:
        curve = min_of_curves(put_result.curve, call_result.curve)
        total = integrate_over_k_squared(curve.pieces).scaled(2 / discount)

    if total.is_finite:
        logger.debug(f"[{snapshot.label}] V(T) = {total.value:.10g}")
    else:
        logger.warning(f"[{snapshot.label}] V(T) 발산: {total.reason} ({total.side})")

    return MaturityVariance(
        label=snapshot.label,
        maturity=snapshot.maturity,
        discount=snapshot.discount,
        total_variance=total,
        put_result=put_result,
        call_result=call_result,
        excluded_strikes=tuple(excluded),
        filter_iterations=iterations,
    )


# ========================================
# 2. 보간
# ========================================

def interpolate_variance(t1, v1, t2, v2, target_days=None, days_per_year=None, mode=None):
    """
    두 만기의 총분산을 목표 만기 T★ = target_days / days_per_year 로 선형 보간

    mode:
        - 'total_variance': V 를 그대로 보간
        - 'annualized_variance': V/T 를 보간한 뒤 T★ 를 곱함

    Returns:
        tuple: (V★, T★, 외삽 여부)

    Raises:
        DegenerateMaturityError: 두 만기가 같음
    """
    target_days = resolve_setting(target_days, 'TARGET_DAYS')
    days_per_year = resolve_setting(days_per_year, 'DAYS_PER_YEAR')
    mode = resolve_setting(mode, 'INTERPOLATION')
    if mode not in INTERPOLATION_MODES:
        raise PreconditionError(f"알 수 없는 보간 방식입니다: {mode}")

    t1, t2 = float(t1), float(t2)
    if t1 == t2:
        raise DegenerateMaturityError(f"두 만기가 같아 보간할 수 없습니다 (T={t1})")
    if t1 > t2:
        t1, v1, t2, v2 = t2, v2, t1, v1

    t_star = target_days / days_per_year
    extrapolated = not (t1 <= t_star <= t2)
    weight = (t_star - t1) / (t2 - t1)

    if mode == 'total_variance':
        v_star = v1 + (v2 - v1) * weight
    else:
        rate1, rate2 = v1 / t1, v2 / t2
        v_star = (rate1 + (rate2 - rate1) * weight) * t_star

    if extrapolated:
        logger.warning(f"목표 만기 {target_days}일이 [{t1:.6f}, {t2:.6f}] 밖이라 외삽합니다.")
    return v_star, t_star, extrapolated


def annualized_index(v_star, t_star):
    """100·sqrt(V★/T★) (음수 분산이면 None)"""
    if v_star < 0:
        return None
    return 100 * math.sqrt(v_star / t_star)


def interpolate_index(v1, v2, target_days=None, mode=None, days_per_year=None):
    """
    두 MaturityVariance 로 목표 만기 지수 계산

    어느 한쪽이 발산하면 지수는 None 이고 사유가 전파된다.
    """
    target_days = resolve_setting(target_days, 'TARGET_DAYS')
    inputs = tuple(sorted((v1, v2), key=lambda item: item.maturity))

    for item in inputs:
        if item.diverged:
            reason = f"{item.label}: {item.total_variance.reason}"
            logger.info(f"지수 계산 불가 - {reason}")
            return IndexResult(
                target_days=target_days,
                interpolated_variance=ExtendedValue.diverged(
                    item.total_variance.reason, item.total_variance.side,
                ),
                index_level=None,
                inputs=inputs,
                reason=reason,
            )

    v_star, t_star, extrapolated = interpolate_variance(
        inputs[0].maturity, inputs[0].total_variance.value,
        inputs[1].maturity, inputs[1].total_variance.value,
        target_days=target_days, days_per_year=days_per_year, mode=mode,
    )
    level = annualized_index(v_star, t_star)

    return IndexResult(
        target_days=target_days,
        interpolated_variance=ExtendedValue.finite(v_star),
        index_level=level,
        inputs=inputs,
        extrapolated=extrapolated,
        reason=NEGATIVE_VARIANCE if level is None else None,
    )


# ========================================
# 3. 만기 선택
# ========================================

def select_maturity_pair(snapshots, target_days=None, days_per_year=None):
    """
    목표 만기를 감싸는 두 스냅샷 (없으면 가장 가까운 두 만기)

    Returns:
        tuple: (가까운 만기, 먼 만기, 외삽 여부)

    Raises:
        PreconditionError: 스냅샷이 2개 미만
        DegenerateMaturityError: 서로 다른 만기가 2개 미만
    """
    if len(snapshots) < 2:
        raise PreconditionError("지수 계산에는 만기가 다른 스냅샷 2개 이상이 필요합니다.")

    target_days = resolve_setting(target_days, 'TARGET_DAYS')
    days_per_year = resolve_setting(days_per_year, 'DAYS_PER_YEAR')
    t_star = Fraction(target_days, days_per_year)

    if len({snapshot.maturity for snapshot in snapshots}) < 2:
        raise DegenerateMaturityError("모든 스냅샷의 만기가 같아 보간할 수 없습니다.")

    below = [s for s in snapshots if to_fraction(s.maturity) <= t_star]
    above = [s for s in snapshots if to_fraction(s.maturity) > t_star]
    if below and above:
        near = max(below, key=lambda s: s.maturity)
        far = min(above, key=lambda s: s.maturity)
        return near, far, False

    ranked = sorted(snapshots, key=lambda s: abs(to_fraction(s.maturity) - t_star))
    first = ranked[0]
    second = next(s for s in ranked[1:] if s.maturity != first.maturity)
    near, far = sorted((first, second), key=lambda s: s.maturity)
    return near, far, True


def proposed_index(snapshots, target_days=None, apply_filter=True, mode=None):
    """스냅샷 목록 → 만기 선택 → V(T) 두 개 → 지수"""
    near, far, _ = select_maturity_pair(snapshots, target_days=target_days)
    return interpolate_index(
        expected_qv(near, apply_filter=apply_filter),
        expected_qv(far, apply_filter=apply_filter),
        target_days=target_days,
        mode=mode,
    )
