"""
정적 차익거래 필요조건 점검과 증명서

네 가지 부등식 묶음을 정확한 유리수로 평가한다.
- 버터플라이: f_{i,k}(K_j) > B_j  (i < j < k)
- 채권 포함 수직 스프레드: 풋 A_i + D(K_j − K_i) ≥ B_j, 콜 B_i − A_j ≤ D(K_j − K_i)  (i < j)
- 채권 상한 (풋만): B_i < D·K_i
- g 직선 절편: 풋 g_{i,j}(0) < 0 ⟺ B_i·K_j < A_j·K_i, 콜 B_j < A_i  (i < j)

후보를 먼저 O(N) 으로 걸러낸 뒤 걸린 j 에 대해서만 실제 위반 쌍/삼중항을 나열한다.
조건은 필요조건일 뿐이므로 빈 결과는 "위반이 발견되지 않음" 을 뜻한다.
"""
import logging
from fractions import Fraction

from apps.core.exceptions import CertificateVerificationError
from apps.core.utils import to_fraction
from apps.pwl.utils import line_through
from apps.putcurve.utils import lower_hull
from apps.quotes.models import Side
from .models import (
    ArbitrageCertificate,
    Instrument,
    InstrumentKind,
    Portfolio,
    Position,
    Violation,
    ViolationKind,
)

logger = logging.getLogger(__name__)


def _violation(kind, chain, indices, message):
    return Violation(
        kind=kind,
        side=chain.side,
        indices=tuple(k + 1 for k in indices),
        strikes=tuple(chain.quotes[k].strike for k in indices),
        message=message,
    )


# ========================================
# 1. 버터플라이
# ========================================

def _hull_value(points, x):
    """점 집합의 아래쪽 볼록 껍질 값 (x 는 첫 점과 마지막 점 사이)"""
    hull = lower_hull(points)
    for u, v in zip(hull, hull[1:]):
        if points[u][0] <= x <= points[v][0]:
            return line_through(points[u], points[v])(x)
    raise ValueError(f"x={x} 가 점 범위 밖입니다.")


def _min_chords(strikes, asks):
    """
    j 마다 min_{i<j<k} f_{i,k}(K_j)

    = j 를 뺀 매도호가 점들의 아래쪽 껍질 값.
    j 가 껍질 꼭짓점이 아니면 전체 껍질 값 그대로이고,
    꼭짓점이면 양옆 꼭짓점 사이만 다시 껍질을 만든다 (합계 O(N)).
    """
    n = len(strikes)
    points = list(zip(strikes, asks))
    hull = lower_hull(points)
    position = {vertex: k for k, vertex in enumerate(hull)}

    values = [None] * n
    edge = 0
    for j in range(1, n - 1):
        if j in position:
            k = position[j]
            u, v = hull[k - 1], hull[k + 1]
            values[j] = _hull_value([points[m] for m in range(u, v + 1) if m != j], strikes[j])
        else:
            while strikes[hull[edge + 1]] < strikes[j]:
                edge += 1
            values[j] = line_through(points[hull[edge]], points[hull[edge + 1]])(strikes[j])
    return values


def _butterfly_violations(chain):
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    n = len(strikes)
    violations = []

    for j, chord in enumerate(_min_chords(strikes, asks)):
        if chord is None or chord > bids[j]:
            continue
        for i in range(j):
            for k in range(j + 1, n):
                value = line_through((strikes[i], asks[i]), (strikes[k], asks[k]))(strikes[j])
                if value <= bids[j]:
                    violations.append(_violation(
                        ViolationKind.BUTTERFLY, chain, (i, j, k),
                        f"f_{{{i + 1},{k + 1}}}(K_{j + 1}) = {float(value):g} ≤ B_{j + 1} = {float(bids[j]):g}",
                    ))
    return violations


# ========================================
# 2. 채권 포함 수직 스프레드
# ========================================

def _vertical_violations(chain, discount):
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    violations = []

    if chain.side == Side.PUT:
        # A_i − D·K_i < B_j − D·K_j
        left = [a - discount * k for k, a in zip(strikes, asks)]
        right = [b - discount * k for k, b in zip(strikes, bids)]
        breach = lambda i, j: left[i] < right[j]  # noqa: E731
        better = lambda x, y: x < y  # noqa: E731
    else:
        # B_i + D·K_i > A_j + D·K_j
        left = [b + discount * k for k, b in zip(strikes, bids)]
        right = [a + discount * k for k, a in zip(strikes, asks)]
        breach = lambda i, j: left[i] > right[j]  # noqa: E731
        better = lambda x, y: x > y  # noqa: E731

    best = None
    for j in range(len(strikes)):
        if best is not None and breach(best, j):
            for i in range(j):
                if breach(i, j):
                    violations.append(_violation(
                        ViolationKind.VERTICAL_WITH_BOND, chain, (i, j),
                        f"K_{i + 1}, K_{j + 1} 수직 스프레드 + 채권이 음의 비용",
                    ))
        if best is None or better(left[j], left[best]):
            best = j
    return violations


# ========================================
# 3. 채권 상한 / g 직선 절편
# ========================================

def _bond_cap_violations(chain, discount):
    if chain.side != Side.PUT:
        return []
    return [
        _violation(
            ViolationKind.BOND_CAP, chain, (i,),
            f"B_{i + 1} = {float(b):g} ≥ D·K_{i + 1} = {float(discount * k):g}",
        )
        for i, (k, b) in enumerate(zip(chain.strikes, chain.bids))
        if b >= discount * k
    ]


def _g_line_violations(chain):
    strikes, asks, bids = chain.strikes, chain.asks, chain.bids
    violations = []

    if chain.side == Side.PUT:
        # B_i / K_i ≥ A_j / K_j
        left = [b / k for k, b in zip(strikes, bids)]
        right = [a / k for k, a in zip(strikes, asks)]
        breach = lambda i, j: left[i] >= right[j]  # noqa: E731
        better = lambda x, y: x > y  # noqa: E731
    else:
        # A_i ≤ B_j
        left = list(asks)
        right = list(bids)
        breach = lambda i, j: left[i] <= right[j]  # noqa: E731
        better = lambda x, y: x < y  # noqa: E731

    best = None
    for j in range(len(strikes)):
        if best is not None and breach(best, j):
            for i in range(j):
                if breach(i, j):
                    violations.append(_violation(
                        ViolationKind.G_LINE_INTERCEPT, chain, (i, j),
                        f"g_{{{i + 1},{j + 1}}} 절편이 음수가 아님",
                    ))
        if best is None or better(left[j], left[best]):
            best = j
    return violations


def check_necessary_conditions(chain, discount, side=None):
    """
    필요조건 위반 목록

    Args:
        chain: 구조 검증을 통과한 QuoteChain
        discount: 할인계수 D
        side: 생략하면 chain.side

    Returns:
        list[Violation]: 종류 순(버터플라이, 수직, 채권 상한, g 직선), 같은 종류 안에서는 인덱스 순
    """
    if side is not None and side != chain.side:
        chain = type(chain)(side=side, quotes=chain.quotes)
    discount = to_fraction(discount)

    violations = (
        _butterfly_violations(chain)
        + _vertical_violations(chain, discount)
        + _bond_cap_violations(chain, discount)
        + _g_line_violations(chain)
    )
    if violations:
        logger.info(f"{chain.side.label} 체인 필요조건 위반 {len(violations)}건")
    return violations


def check_snapshot(snapshot):
    """풋/콜 체인 모두 점검"""
    return (
        check_necessary_conditions(snapshot.put_chain, snapshot.discount)
        + check_necessary_conditions(snapshot.call_chain, snapshot.discount)
    )


# ========================================
# 4. 증명서
# ========================================

def _option(chain, index, quantity):
    kind = InstrumentKind.PUT if chain.side == Side.PUT else InstrumentKind.CALL
    return Position(
        instrument=Instrument(kind, chain.strikes[index]),
        quantity=Fraction(quantity),
        bid=chain.bids[index],
        ask=chain.asks[index],
    )


def _bond(quantity, discount):
    return Position(Instrument(InstrumentKind.BOND), Fraction(quantity), discount, discount)


def _portfolio_for(violation, chain, discount):
    strikes = chain.strikes
    indices = [k - 1 for k in violation.indices]

    if violation.kind == ViolationKind.BUTTERFLY:
        i, j, k = indices
        weight = (strikes[k] - strikes[j]) / (strikes[k] - strikes[i])
        return Portfolio((
            _option(chain, i, weight),
            _option(chain, j, -1),
            _option(chain, k, 1 - weight),
        ))

    if violation.kind == ViolationKind.VERTICAL_WITH_BOND:
        i, j = indices
        bonds = _bond(strikes[j] - strikes[i], discount)
        if chain.side == Side.PUT:
            return Portfolio((_option(chain, i, 1), _option(chain, j, -1), bonds))
        return Portfolio((_option(chain, j, 1), _option(chain, i, -1), bonds))

    if violation.kind == ViolationKind.BOND_CAP:
        (i,) = indices
        return Portfolio((_bond(strikes[i], discount), _option(chain, i, -1)))

    i, j = indices
    if chain.side == Side.PUT:
        # K_i/K_j 개의 풋(K_j) 매수, 풋(K_i) 1개 매도
        return Portfolio((_option(chain, j, strikes[i] / strikes[j]), _option(chain, i, -1)))
    return Portfolio((_option(chain, i, 1), _option(chain, j, -1)))


def _state_grid(strikes):
    """{0} ∪ 행사가 ∪ 인접 행사가 중점 ∪ {K_N + 1}"""
    states = {Fraction(0), strikes[-1] + 1, *strikes}
    states.update((a + b) / 2 for a, b in zip(strikes, strikes[1:]))
    return tuple(sorted(states))


def certificate_for(violation, chain, discount):
    """
    위반에 대한 정적 차익거래 포트폴리오

    비용 C ≤ 0 과 모든 격자 상태에서 V − C/D ≥ 0, 적어도 한 상태에서 > 0 을 직접 검증한다.

    Raises:
        CertificateVerificationError: 검증 실패 (정상 입력에서는 일어나면 안 됨)
    """
    discount = to_fraction(discount)
    portfolio = _portfolio_for(violation, chain, discount)
    cost = portfolio.cost
    states = _state_grid(chain.strikes)

    if cost > 0:
        raise CertificateVerificationError(
            f"{violation.kind.value} {violation.indices}: 포트폴리오 비용 {float(cost):g} > 0"
        )

    witnesses = []
    for state in states:
        net = portfolio.value(state) - cost / discount
        if net < 0:
            raise CertificateVerificationError(
                f"{violation.kind.value} {violation.indices}: S_T={state} 에서 순가치 {float(net):g} < 0"
            )
        if net > 0:
            witnesses.append(state)

    if not witnesses:
        raise CertificateVerificationError(
            f"{violation.kind.value} {violation.indices}: 순가치가 양수인 상태가 없습니다."
        )

    return ArbitrageCertificate(
        violation=violation,
        portfolio=portfolio,
        witness_states=tuple(witnesses),
        checked_states=states,
    )
