"""
직선 기하 연산

- line_through: 두 점을 지나는 직선
- upper_envelope: 직선 집합의 상부 포락선 (볼록 껍질 트릭)
- min_of_curves: 비감소 곡선 p 와 비증가 곡선 c 의 점별 최솟값
- integrate_over_k_squared: ∫ (aK + b) / K² dK 의 닫힌 형식 적분

교점/분기점은 모두 정확한 유리수로 계산하고, 적분의 로그 항만 float 을 쓴다.
"""
import logging
import math
from fractions import Fraction

from apps.core.exceptions import ContractViolationError, DegenerateLineError, PreconditionError
from apps.core.models import (
    INVERSE_K_AT_ORIGIN,
    LINEAR_GROWTH_AT_INFINITY,
    POSITIVE_AT_ORIGIN,
    ExtendedValue,
)
from apps.core.utils import to_fraction
from .models import ZERO_LINE, Line, Piece, PiecewiseLinearCurve

logger = logging.getLogger(__name__)


def line_through(p1, p2, tag=''):
    """
    두 점 (행사가, 값) 을 지나는 직선

    Raises:
        DegenerateLineError: 두 행사가가 같을 때
    """
    x1, y1 = to_fraction(p1[0]), to_fraction(p1[1])
    x2, y2 = to_fraction(p2[0]), to_fraction(p2[1])

    if x1 == x2:
        raise DegenerateLineError(f"행사가가 같은 두 점으로는 직선을 만들 수 없습니다 (K={x1})")

    slope = (y2 - y1) / (x2 - x1)
    return Line(slope, y1 - slope * x1, tag)


def _is_redundant(left, middle, right):
    """
    기울기 순 left < middle < right 에서 middle 이 포락선에 나타나지 않는지

    right 가 left 를 추월하는 지점이 middle 이 left 를 추월하는 지점보다 늦지 않으면
    middle 은 기껏해야 한 점에서만 닿는다.
    """
    x_left_right = left.crossing(right)
    x_left_middle = left.crossing(middle)
    return x_left_right <= x_left_middle


def upper_envelope(lines, include_zero=False):
    """
    직선 집합의 점별 최댓값

    기울기 순으로 정렬(같은 기울기는 절편이 큰 것만, 완전히 같으면 먼저 나온 것)한 뒤
    스택 한 번 훑기로 지배당하는 직선을 버린다. O(M log M).

    Args:
        lines: Line 들
        include_zero: True 면 0 함수도 포함

    Returns:
        PiecewiseLinearCurve: (−∞, ∞) 를 덮는 볼록 곡선
    """
    candidates = list(lines)
    if include_zero:
        candidates.append(ZERO_LINE)

    if not candidates:
        raise PreconditionError("직선이 하나도 없는 상부 포락선은 정의되지 않습니다.")

    # 안정 정렬이므로 완전히 같은 직선은 입력 순서가 유지됨
    ordered = sorted(candidates, key=lambda line: (line.slope, -line.intercept))

    distinct = []
    for line in ordered:
        if distinct and distinct[-1].slope == line.slope:
            continue
        distinct.append(line)

    hull = []
    for line in distinct:
        while len(hull) >= 2 and _is_redundant(hull[-2], hull[-1], line):
            hull.pop()
        hull.append(line)

    pieces = []
    start = None
    for current, following in zip(hull, hull[1:]):
        end = current.crossing(following)
        pieces.append(Piece(start, end, current))
        start = end
    pieces.append(Piece(start, None, hull[-1]))

    return PiecewiseLinearCurve(tuple(pieces))


def _line_on(curve, lo, hi):
    """[lo, hi] 안에서 curve 가 쓰는 직선 (구간 안에는 curve 의 분기점이 없음)"""
    inner = lo + 1 if hi is None else (lo + hi) / 2
    return curve.piece_at(inner).line


def min_of_curves(p, c):
    """
    min{p(K), c(K)} on [0, ∞)

    두 곡선의 분기점을 합친 각 구간에서 두 직선의 교점을 (구간 내부에 있을 때만) 하나 끼워 넣는다.
    인접한 같은 직선 조각은 합친다.

    Args:
        p: 비감소 곡선 (풋)
        c: 비증가 곡선 (콜)

    Returns:
        PiecewiseLinearCurve: 0 에서 시작하는 조각들, 각 조각의 source 는 'put' / 'call'
    """
    zero = Fraction(0)
    cuts = sorted({x for x in p.breakpoints + c.breakpoints if x > zero})
    bounds = [zero] + cuts + [None]

    raw = []
    for lo, hi in zip(bounds, bounds[1:]):
        put_line = _line_on(p, lo, hi)
        call_line = _line_on(c, lo, hi)

        if put_line == call_line:
            raw.append(Piece(lo, hi, put_line, 'put'))
            continue

        cross = put_line.crossing(call_line)
        if cross is not None and cross > lo and (hi is None or cross < hi):
            # 교점 왼쪽은 왼쪽에서 작은 직선, 오른쪽은 나머지
            inner = (lo + cross) / 2
            if put_line(inner) <= call_line(inner):
                raw.append(Piece(lo, cross, put_line, 'put'))
                raw.append(Piece(cross, hi, call_line, 'call'))
            else:
                raw.append(Piece(lo, cross, call_line, 'call'))
                raw.append(Piece(cross, hi, put_line, 'put'))
            continue

        if hi is None:
            inner = max(lo, cross) + 1 if cross is not None else lo + 1
        else:
            inner = (lo + hi) / 2

        if put_line(inner) <= call_line(inner):
            raw.append(Piece(lo, hi, put_line, 'put'))
        else:
            raw.append(Piece(lo, hi, call_line, 'call'))

    merged = [raw[0]]
    for piece in raw[1:]:
        last = merged[-1]
        if piece.line == last.line:
            merged[-1] = Piece(last.start, piece.end, last.line, last.source)
        else:
            merged.append(piece)

    return PiecewiseLinearCurve(tuple(merged))


def _check_non_negative(piece):
    line = piece.line
    start_value = line(piece.start)
    end_negative = (line.slope < 0) if piece.end is None else (line(piece.end) < 0)
    if start_value < 0 or end_negative:
        raise ContractViolationError(
            f"구간 [{piece.start}, {piece.end}] 에서 곡선 값이 음수입니다 ({line.tag or 'line'})"
        )


def integrate_over_k_squared(pieces):
    """
    ∫ curve(K) / K² dK (조각별 닫힌 형식)

    [x1, x2] 위의 aK + b 조각은 a·ln(x2/x1) + b·(1/x1 − 1/x2).
    유리수 항은 정확히 더하고, 로그 항만 math.fsum 으로 더한다.

    발산 (결과 데이터, 예외 아님):
        - 원점에 붙은 조각의 b > 0 → 'positive value at origin'
        - 원점에 붙은 조각의 b = 0, a > 0 → 'O(1/K) at origin'
        - 마지막 조각의 a > 0 → 'linear growth at infinity'

    Raises:
        PreconditionError: 조각이 연속이 아니거나 음수 구간에서 시작
        ContractViolationError: 조각 안에서 값이 음수
    """
    pieces = list(pieces)
    if not pieces:
        return ExtendedValue.finite(0)

    for left, right in zip(pieces, pieces[1:]):
        if left.end is None or left.end != right.start:
            raise PreconditionError("적분 조각이 연속되지 않습니다.")
    if pieces[0].start is None or pieces[0].start < 0:
        raise PreconditionError("적분은 K ≥ 0 구간에서만 정의됩니다.")

    rational_part = Fraction(0)
    log_terms = []

    for piece in pieces:
        _check_non_negative(piece)
        a, b = piece.line.slope, piece.line.intercept
        x1, x2 = piece.start, piece.end

        if x1 == 0:
            if b > 0:
                return ExtendedValue.diverged(POSITIVE_AT_ORIGIN, piece.source or None)
            if a > 0:
                return ExtendedValue.diverged(INVERSE_K_AT_ORIGIN, piece.source or None)
            # 원점에서 시작하는 0 조각 (음수는 위에서 걸러짐)
            continue

        if x2 is None:
            if a > 0:
                return ExtendedValue.diverged(LINEAR_GROWTH_AT_INFINITY, piece.source or None)
            rational_part += b / x1
            continue

        rational_part += b * (1 / x1 - 1 / x2)
        if a != 0:
            log_terms.append(float(a) * math.log1p(float((x2 - x1) / x1)))

    return ExtendedValue.finite(math.fsum([float(rational_part), *log_terms]))
