"""
콜 가격곡선 구성 (대칭 변환)

행사가를 K ↦ C★ − K (C★ = 2·K_N) 로 뒤집으면 비증가 콜 곡선 문제가 비감소 풋 곡선 문제가 된다.
풋 구성을 그대로 돌린 뒤 곡선/직선/인덱스를 다시 뒤집는다.
"""
import logging

from apps.core.models import LINEAR_GROWTH_AT_INFINITY
from apps.core.utils import to_fraction
from apps.putcurve.models import DivergenceReport
from apps.putcurve.utils import classify_put, construct_put_curve
from apps.quotes.models import Quote, QuoteChain
from .models import CallClassification, CallCurveResult

logger = logging.getLogger(__name__)


def mirror_strike(chain):
    """C★ = 2·K_N"""
    return 2 * chain.quotes[-1].strike


def reflect_chain(chain, c_star):
    """행사가를 C★ − K 로 뒤집은 체인 (옵션 종류도 반대로)"""
    return QuoteChain(
        side=chain.side.opposite,
        quotes=tuple(
            Quote(strike=c_star - quote.strike, bid=quote.bid, ask=quote.ask)
            for quote in reversed(chain.quotes)
        ),
    )


def _mirror_classification(classification, c_star):
    """뒤집힌 체인의 분류를 원래 인덱스로: k ↦ N + 1 − k, (i, j) ↦ (N+1−j, N+1−i)"""
    n = classification.n
    c_star = to_fraction(c_star)

    def pairs(members):
        mirrored = {}
        for (i, j), line in members.items():
            mirrored[(n + 1 - j, n + 1 - i)] = line.reflect(c_star).retag(f'f_{n + 1 - j},{n + 1 - i}')
        return mirrored

    def flip(index):
        return None if index is None else n + 1 - index

    return CallClassification(
        n=n,
        L_members=pairs(classification.L_members),
        M_members=pairs(classification.M_members),
        I_L=flip(classification.J_L),
        J_L=flip(classification.I_L),
        I_M=flip(classification.J_M),
        J_M=flip(classification.I_M),
        fD=classification.fD.reflect(c_star),
        fD_index=flip(classification.fD_index),
        gD=classification.gD.reflect(c_star),
        gD_index=flip(classification.gD_index),
    )


def classify_call(chain, discount):
    """콜 체인의 𝓜′ / 𝓛′ 분류 (콜 인덱스 기준)"""
    c_star = mirror_strike(chain)
    return _mirror_classification(classify_put(reflect_chain(chain, c_star), discount), c_star)


def _diagnose_call_curve(curve):
    terminal = curve.pieces[-1].line
    if terminal.slope > 0:
        return DivergenceReport(True, LINEAR_GROWTH_AT_INFINITY, terminal.tag)
    if terminal.slope == 0 and terminal.intercept > 0:
        return DivergenceReport(
            diverges=False,
            warning=f'positive constant tail {float(terminal.intercept)}',
            line_tag=terminal.tag,
        )
    return DivergenceReport(diverges=False)


def detect_call_divergence(result):
    """
    맨 오른쪽 조각의 기울기 > 0 이면 발산 ('linear growth at infinity')

    양의 상수 꼬리는 적분이 수렴하므로 발산이 아니라 경고로만 보고한다.
    """
    return _diagnose_call_curve(result.curve)


def construct_call_curve(chain, discount):
    """
    콜 가격곡선 c = 풋 구성의 대칭

    𝓜′ 이 비면 풋 쪽 대체 구성(𝓛, g^D, f1/f2)이 대칭으로 적용된다.
    """
    c_star = mirror_strike(chain)
    mirrored = construct_put_curve(reflect_chain(chain, c_star), discount)

    curve = mirrored.curve.reflect(c_star)
    divergence = _diagnose_call_curve(curve)
    if divergence.diverges:
        logger.warning(f"콜 곡선 발산: {divergence.reason} (직선 {divergence.line_tag})")
    elif divergence.warning:
        logger.warning(f"콜 곡선 경고: {divergence.warning}")

    return CallCurveResult(
        curve=curve,
        case_taken=mirrored.case_taken,
        classification=_mirror_classification(mirrored.classification, c_star),
        f0=None if mirrored.f0 is None else mirrored.f0.reflect(to_fraction(c_star)),
        divergence=divergence,
        c_star=c_star,
    )


def verify_call_postconditions(result, chain, discount):
    """
    콜 곡선 성질 점검

    Returns:
        list[str]: 실패한 성질 ('a' 충분히 큰 K 에서 0, 'b' 기울기 ≥ −D, 'c' 호가 범위,
                   'monotone' 비증가, 'convex' 볼록)
    """
    discount = to_fraction(discount)
    curve = result.curve
    failed = []

    if not curve.pieces[-1].line.is_zero:
        failed.append('a')
    if any(slope < -discount for slope in curve.slopes):
        failed.append('b')
    if any(not (b <= curve(k) <= a) for k, a, b in zip(chain.strikes, chain.asks, chain.bids)):
        failed.append('c')
    if any(slope > 0 for slope in curve.restrict(0).slopes):
        failed.append('monotone')
    if not curve.is_convex():
        failed.append('convex')

    return failed
