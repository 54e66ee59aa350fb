"""
풋 가격곡선 구성

1. classify_put: 매도호가를 지나는 직선 f_{i,j} 를 𝓛 / 𝓜 로 분류하고 f^D, g^D 계산
2. construct_put_curve: 𝓜 → 𝓛 → 대체 구성 순서로 상부 포락선 선택
3. detect_put_divergence: 원점 근처 곡선 값으로 ∫ p/K² 발산 판정
4. filter_anomalies: g_{i, I^𝓜}(0) ≥ 0 인 호가를 제외하고 다시 구성

모든 판정은 Fraction 으로 정확하게 비교한다 (호가가 같은 경계 사례가 흔함).
"""
import logging
from dataclasses import replace

from apps.core.exceptions import FilterFailureError, PreconditionError
from apps.core.models import INVERSE_K_AT_ORIGIN, POSITIVE_AT_ORIGIN
from apps.core.utils import resolve_setting, to_fraction
from apps.pwl.models import Line
from apps.pwl.utils import line_through, upper_envelope
from .models import CaseTaken, DivergenceReport, FilterOutcome, PutClassification, PutCurveResult

logger = logging.getLogger(__name__)


# ========================================
# 1. 분류
# ========================================

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points):
    """
    x 오름차순 점들의 아래쪽 볼록 껍질 (단조 사슬)

    한 직선 위에 놓인 중간 점은 꼭짓점에서 빠진다.

    Returns:
        list[int]: 꼭짓점 인덱스 (0부터)
    """
    hull = []
    for k, point in enumerate(points):
        while len(hull) >= 2 and _cross(points[hull[-2]], points[hull[-1]], point) <= 0:
            hull.pop()
        hull.append(k)
    return hull


def _pair_tag(i, j):
    return f'f_{i},{j}'


def _boundary_lines(chain, discount):
    """f^D, g^D 와 달성 인덱스 (동률이면 가장 큰 인덱스, 1부터)"""
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids

    j_best = 0
    i_best = 0
    for n in range(len(strikes)):
        if asks[n] - discount * strikes[n] <= asks[j_best] - discount * strikes[j_best]:
            j_best = n
        if bids[n] - discount * strikes[n] >= bids[i_best] - discount * strikes[i_best]:
            i_best = n

    f_d = Line(discount, asks[j_best] - discount * strikes[j_best], 'fD')
    g_d = Line(discount, bids[i_best] - discount * strikes[i_best], 'gD')
    return f_d, j_best + 1, g_d, i_best + 1


def _classification(chain, discount, l_members, m_members):
    f_d, j_index, g_d, i_index = _boundary_lines(chain, discount)
    return PutClassification(
        n=len(chain),
        L_members=l_members,
        M_members=m_members,
        I_L=min((i for i, _ in l_members), default=None),
        J_L=max((j for _, j in l_members), default=None),
        I_M=min((i for i, _ in m_members), default=None),
        J_M=max((j for _, j in m_members), default=None),
        fD=f_d,
        fD_index=j_index,
        gD=g_d,
        gD_index=i_index,
    )


def classify_put(chain, discount):
    """
    𝓛 / 𝓜 분류 (볼록 껍질 경로)

    모든 매도호가 아래에 있는 f_{i,j} 는 매도호가 점들의 아래쪽 볼록 껍질의 한 변 위에
    i, j 가 함께 놓인 경우뿐이다. 변마다 직선 L 하나를 만들고,
    - 𝓛: L(0) < 0 이고 L′ ≤ D
    - 𝓜: L′ ≤ D 이고 m < i 인 m 에서 L(K_m) < B_m
    을 판정한다. m 은 앞에서부터 훑어 처음 나오는 것 하나만 보면 된다.

    Args:
        chain: 풋 QuoteChain (구조 검증 통과)
        discount: 할인계수 D ∈ (0, 1]

    Returns:
        PutClassification
    """
    if len(chain) == 0:
        raise PreconditionError("빈 체인은 분류할 수 없습니다.")

    discount = to_fraction(discount)
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    points = list(zip(strikes, asks))

    l_members = {}
    m_members = {}

    hull = lower_hull(points)
    for u, v in zip(hull, hull[1:]):
        edge = line_through(points[u], points[v])
        if edge.slope > discount:
            continue

        support = [m for m in range(u, v + 1) if edge(strikes[m]) == asks[m]]
        first_breach = next(
            (m for m in range(support[-2]) if edge(strikes[m]) < bids[m]),
            None,
        )

        for position, i in enumerate(support):
            for j in support[position + 1:]:
                line = edge.retag(_pair_tag(i + 1, j + 1))
                if edge.intercept < 0:
                    l_members[(i + 1, j + 1)] = line
                if first_breach is not None and first_breach < i:
                    m_members[(i + 1, j + 1)] = line

    classification = _classification(chain, discount, l_members, m_members)
    logger.debug(
        f"풋 분류: N={classification.n}, |𝓛|={len(l_members)}, |𝓜|={len(m_members)}, "
        f"I^𝓛={classification.I_L}, I^𝓜={classification.I_M}"
    )
    return classification


def classify_put_naive(chain, discount):
    """
    정의 그대로의 O(N³) 분류 (classify_put 검증용 기준 구현)
    """
    if len(chain) == 0:
        raise PreconditionError("빈 체인은 분류할 수 없습니다.")

    discount = to_fraction(discount)
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    n = len(strikes)

    l_members = {}
    m_members = {}
    for i in range(n):
        for j in range(i + 1, n):
            line = line_through((strikes[i], asks[i]), (strikes[j], asks[j]), _pair_tag(i + 1, j + 1))
            if any(line(strikes[k]) > asks[k] for k in range(n)):
                continue
            if line.slope > discount:
                continue
            if line.intercept < 0:
                l_members[(i + 1, j + 1)] = line
            if any(line(strikes[m]) < bids[m] for m in range(i)):
                m_members[(i + 1, j + 1)] = line

    return _classification(chain, discount, l_members, m_members)


# ========================================
# 2. 외삽 직선
# ========================================

def _min_slope_through_ask(chain, anchor, tag):
    """
    (K_anchor, A_anchor) 를 지나고 기울기가 min_{i<anchor} (A_anchor − B_i)/(K_anchor − K_i) 인 직선

    최솟값 동률은 가장 작은 i 를 택한다. anchor 왼쪽에 호가가 없으면 None.
    """
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    a = anchor - 1
    best = None
    for i in range(a):
        slope = (asks[a] - bids[i]) / (strikes[a] - strikes[i])
        if best is None or slope < best:
            best = slope
    if best is None:
        return None
    return Line(best, asks[a] - best * strikes[a], tag)


def _max_slope_through_ask(chain, anchor, tag):
    """(K_anchor, A_anchor) 를 지나고 기울기가 max_{j>anchor} (B_j − A_anchor)/(K_j − K_anchor) 인 직선"""
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    a = anchor - 1
    best = None
    for j in range(a + 1, len(strikes)):
        slope = (bids[j] - asks[a]) / (strikes[j] - strikes[a])
        if best is None or slope > best:
            best = slope
    if best is None:
        return None
    return Line(best, asks[a] - best * strikes[a], tag)


def build_f0_for_M(chain, classification):
    """
    𝓜 구성용 외삽 직선 f₀: (K_{I^𝓜}, A_{I^𝓜}) 를 지나는 최소 기울기 직선

    Raises:
        PreconditionError: 𝓜 이 비어 있을 때
    """
    if not classification.M_members:
        raise PreconditionError("𝓜 이 비어 있어 f0 를 만들 수 없습니다.")
    return _min_slope_through_ask(chain, classification.I_M, 'f0')


# ========================================
# 3. 곡선 구성
# ========================================

def _fallback_lines(chain, classification):
    """𝓛 = ∅ 일 때의 대체 구성 (p̃)"""
    f_d, g_d = classification.fD, classification.gD

    # 두 직선의 기울기가 같으므로 점별 비교 = 절편 비교
    if g_d.intercept <= f_d.intercept:
        return CaseTaken.FALLBACK_GD, [g_d]

    anchor = classification.fD_index
    f1 = _min_slope_through_ask(chain, anchor, 'f1')
    if f1 is None:
        logger.warning(
            f"f^D 달성 인덱스 J={anchor} 왼쪽에 호가가 없어 f1 을 정의할 수 없습니다. "
            f"max{{g^D, 0}} 로 대체합니다."
        )
        return CaseTaken.FALLBACK_GD, [g_d]

    anchor_strike = chain.strikes[anchor - 1]
    f2 = _max_slope_through_ask(chain, anchor, 'f2')
    if f2 is not None and f1.slope < f2.slope:
        return CaseTaken.FALLBACK_F1_F2, [
            _non_decreasing(f1, anchor_strike),
            _non_decreasing(f2, anchor_strike),
        ]
    return CaseTaken.FALLBACK_F1, [_non_decreasing(f1, anchor_strike)]


def _non_decreasing(line, anchor_strike):
    """
    기울기가 음수인 직선 → anchor 에서 같은 값을 갖는 수평선

    음의 기울기는 차익거래 위반 체인에서만 나온다. 모든 직선의 기울기가 0 이상이면
    max(…, 0) 포락선은 비감소다.
    """
    if line.slope >= 0:
        return line
    logger.debug(f"직선 {line.tag} 기울기 {float(line.slope)} < 0 → K={anchor_strike} 에서 수평선으로 대체")
    return Line(0, line(anchor_strike), line.tag)


def _non_decreasing_members(chain, members):
    """f_{i,j} 의 기준점은 (K_j, A_j)"""
    return {
        pair: _non_decreasing(line, chain.strikes[pair[1] - 1])
        for pair, line in members.items()
    }


def construct_put_curve(chain, discount):
    """
    풋 가격곡선 p

    case 선택:
        - 𝓜 ≠ ∅: p̂ = max(𝓜 ∪ {f₀, f^D, 0})
        - 𝓛 ≠ ∅: p = max(𝓛 ∪ {f^D, 0}), f₀(i < I^𝓛 기준)는 I^𝓛 > 1 이고
          f₀′ ≤ min 𝓛 기울기일 때만 포함
        - 그 외: g^D ≤ f^D 이면 max{g^D, 0}, 아니면 f1 / f2 구성

    case 판정은 원래 직선으로 하고, 포락선에는 음의 기울기를 수평으로 바꾼 직선을 쓴다.
    발산은 예외가 아니라 결과의 divergence 에 담긴다.
    """
    classification = classify_put(chain, discount)
    strikes = chain.strikes
    f0 = None

    if classification.M_members:
        case = CaseTaken.M_CLASS
        f0 = _non_decreasing(build_f0_for_M(chain, classification), strikes[classification.I_M - 1])
        members = _non_decreasing_members(chain, classification.M_members)
        lines = classification.distinct_lines(members) + [f0, classification.fD]

    elif classification.L_members:
        case = CaseTaken.L_CLASS
        members = _non_decreasing_members(chain, classification.L_members)
        lines = classification.distinct_lines(members) + [classification.fD]
        if classification.I_L > 1:
            candidate = _min_slope_through_ask(chain, classification.I_L, 'f0')
            if candidate.slope <= classification.min_L_slope:
                f0 = _non_decreasing(candidate, strikes[classification.I_L - 1])
                lines.append(f0)

    else:
        case, lines = _fallback_lines(chain, classification)

    curve = upper_envelope(lines, include_zero=True)
    divergence = _diagnose_put_curve(curve)

    logger.debug(f"풋 곡선 구성: case={case.value}, 조각 {len(curve)}개")
    if divergence.diverges:
        logger.warning(
            f"풋 곡선 발산: {divergence.reason} (직선 {divergence.line_tag})"
        )

    return PutCurveResult(
        curve=curve,
        case_taken=case,
        classification=classification,
        f0=f0,
        divergence=divergence,
    )


# ========================================
# 4. 발산 진단
# ========================================

def _diagnose_put_curve(curve):
    lines = [line for line in curve.restrict(0).active_lines if not line.is_zero]
    if not lines:
        return DivergenceReport(diverges=False)

    worst = max(lines, key=lambda line: (line.intercept, line.slope))
    if worst.intercept > 0:
        return DivergenceReport(True, POSITIVE_AT_ORIGIN, worst.tag)
    if worst.intercept == 0 and worst.slope > 0:
        return DivergenceReport(True, INVERSE_K_AT_ORIGIN, worst.tag)
    return DivergenceReport(diverges=False)


def detect_put_divergence(result):
    """
    [0, ∞) 에서 활성인 0 이 아닌 직선들의 최대 절편으로 발산 판정

    - 절편 > 0: 'positive value at origin'
    - 절편 = 0 이고 기울기 > 0: 'O(1/K) at origin'
    """
    return _diagnose_put_curve(result.curve)


def verify_put_postconditions(result, chain, discount):
    """
    곡선 성질 점검

    Returns:
        list[str]: 실패한 성질 ('a' 원점 근방 0, 'b' 기울기 ≤ D, 'c' 호가 범위,
                   'monotone' 비감소, 'convex' 볼록)
    """
    discount = to_fraction(discount)
    curve = result.curve
    failed = []

    if not curve.piece_at(0).line.is_zero:
        failed.append('a')
    if any(slope > discount for slope in curve.slopes):
        failed.append('b')
    if any(not (b <= curve(k) <= a) for k, a, b in zip(chain.strikes, chain.asks, chain.bids)):
        failed.append('c')
    if any(slope < 0 for slope in curve.restrict(0).slopes):
        failed.append('monotone')
    if not curve.is_convex():
        failed.append('convex')

    return failed


# ========================================
# 5. 이상치 필터
# ========================================

def anomalous_strikes(chain, classification):
    """
    g_{i, I^𝓜}(0) ≥ 0 인 i < I^𝓜 의 행사가

    g_{i,j}(0) ≥ 0 ⟺ B_i·K_j ≥ A_j·K_i
    """
    if not classification.M_members:
        return []

    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    anchor = classification.I_M - 1
    return [
        chain.quotes[i].strike
        for i in range(anchor)
        if bids[i] * strikes[anchor] >= asks[anchor] * strikes[i]
    ]


def filter_anomalies(chain, discount, max_iterations=None):
    """
    차익거래성 이상 호가 제외

    위반 호가를 모두 빼고 다시 분류/구성하는 과정을 위반이 없어질 때까지 반복한다.
    제외로 𝓜 이 비면 위반도 없으므로 멈춘다.

    Args:
        max_iterations: 제외 반복 한도 (None 이면 설정 FILTER_MAX_ITERATIONS)

    Returns:
        FilterOutcome

    Raises:
        PreconditionError: 처음 체인의 𝓜 이 비어 있을 때
        FilterFailureError: 한도 안에 수렴하지 못함 (부분 결과 포함)
    """
    max_iterations = resolve_setting(max_iterations, 'FILTER_MAX_ITERATIONS')

    result = construct_put_curve(chain, discount)
    if not result.classification.M_members:
        raise PreconditionError("𝓜 이 비어 있는 체인에는 이상치 필터를 적용할 수 없습니다.")

    current = chain
    excluded = []
    passes = 0

    while True:
        violators = anomalous_strikes(current, result.classification)
        if not violators:
            break

        if passes >= max_iterations:
            raise FilterFailureError(
                f"이상치 필터가 {max_iterations}회 안에 수렴하지 않았습니다.",
                chain=current,
                excluded_strikes=tuple(excluded),
                iterations=passes,
            )

        passes += 1
        logger.info(f"이상치 필터 {passes}회차: 행사가 {[str(k) for k in violators]} 제외")
        excluded.extend(violators)
        current = current.without(violators)
        result = construct_put_curve(current, discount)

    result = replace(result, excluded_strikes=tuple(excluded))
    return FilterOutcome(
        chain=current,
        excluded_strikes=tuple(excluded),
        iterations=passes,
        result=result,
    )
