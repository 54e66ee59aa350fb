"""
직선과 구간별 선형(piecewise-linear) 곡선

모든 기울기, 절편, 분기점은 Fraction 으로 정확하게 보관한다.
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from apps.core.utils import to_fraction


@dataclass(frozen=True)
class Line:
    """
    y = slope·K + intercept

    tag 는 출처 표시 (f_{i,j}, f0, fD, gD, f1, f2, zero ...) 이고 동등성 비교에서 제외된다.
    """
    slope: Fraction
    intercept: Fraction
    tag: str = field(default='', compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'slope', to_fraction(self.slope))
        object.__setattr__(self, 'intercept', to_fraction(self.intercept))

    def __call__(self, x):
        return self.slope * to_fraction(x) + self.intercept

    @property
    def is_zero(self):
        return self.slope == 0 and self.intercept == 0

    def crossing(self, other):
        """두 직선의 교점 x (평행하면 None)"""
        if self.slope == other.slope:
            return None
        return (other.intercept - self.intercept) / (self.slope - other.slope)

    def reflect(self, c_star):
        """K ↦ C★ − K 대칭: a·K + b → −a·K + (a·C★ + b)"""
        c_star = to_fraction(c_star)
        return Line(-self.slope, self.slope * c_star + self.intercept, self.tag)

    def retag(self, tag):
        return Line(self.slope, self.intercept, tag)


ZERO_LINE = Line(0, 0, 'zero')


@dataclass(frozen=True)
class Piece:
    """
    [start, end] 구간의 한 직선 조각

    start=None 은 −∞, end=None 은 +∞.
    source 는 min{p, c} 에서 조각이 어느 곡선에서 왔는지 ('put' / 'call').
    """
    start: Fraction | None
    end: Fraction | None
    line: Line
    source: str = field(default='', compare=False)

    def contains(self, x):
        return ((self.start is None or self.start <= x)
                and (self.end is None or x <= self.end))


@dataclass(frozen=True)
class PiecewiseLinearCurve:
    """
    연속인 구간별 선형 곡선

    조각은 왼쪽부터 순서대로 이어진다 (piece[k].end == piece[k+1].start).
    상부 포락선은 (−∞, ∞) 전체를, min{p, c} 결과는 [0, ∞) 를 덮는다.
    """
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(self.pieces))

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    @property
    def breakpoints(self):
        return [piece.start for piece in self.pieces[1:]]

    @property
    def active_lines(self):
        return [piece.line for piece in self.pieces]

    @property
    def slopes(self):
        return [piece.line.slope for piece in self.pieces]

    def piece_at(self, x):
        """x 를 포함하는 조각 (분기점에서는 오른쪽 조각)"""
        index = bisect_right(self.breakpoints, x)
        return self.pieces[index]

    def __call__(self, x):
        x = to_fraction(x)
        return self.piece_at(x).line(x)

    def is_convex(self):
        slopes = self.slopes
        return all(a <= b for a, b in zip(slopes, slopes[1:]))

    def restrict(self, lo, hi=None):
        """[lo, hi] 로 자른 곡선 (hi=None 이면 +∞ 까지)"""
        lo = to_fraction(lo)
        hi = None if hi is None else to_fraction(hi)
        clipped = []
        for piece in self.pieces:
            if piece.end is not None and piece.end <= lo:
                continue
            if hi is not None and piece.start is not None and piece.start >= hi:
                continue
            start = lo if piece.start is None or piece.start < lo else piece.start
            if hi is None:
                end = piece.end
            else:
                end = hi if piece.end is None or piece.end > hi else piece.end
            clipped.append(Piece(start, end, piece.line, piece.source))
        return PiecewiseLinearCurve(tuple(clipped))

    def reflect(self, c_star):
        """K ↦ C★ − K 대칭 곡선"""
        c_star = to_fraction(c_star)
        mirrored = []
        for piece in reversed(self.pieces):
            mirrored.append(Piece(
                start=None if piece.end is None else c_star - piece.end,
                end=None if piece.start is None else c_star - piece.start,
                line=piece.line.reflect(c_star),
                source=piece.source,
            ))
        return PiecewiseLinearCurve(tuple(mirrored))

    def grid(self, n, hi, lo=0):
        """
        곡선 덤프용 표본점

        [lo, hi] 의 균등 격자 n 개 + 구간 안의 모든 분기점.

        Returns:
            list[tuple]: (K, 값, 조각 tag) - K 오름차순, 중복 없음
        """
        lo = to_fraction(lo)
        hi = to_fraction(hi)
        points = {lo + (hi - lo) * Fraction(k, n - 1) for k in range(n)}
        points.update(x for x in self.breakpoints if lo <= x <= hi)

        rows = []
        for x in sorted(points):
            piece = self.piece_at(x)
            rows.append((x, piece.line(x), piece.line.tag))
        return rows
