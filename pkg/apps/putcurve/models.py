"""
풋 가격곡선 구성 결과 타입

인덱스는 체인과 같이 1부터 시작한다.
"""
from dataclasses import dataclass, field

from django.db import models

from apps.pwl.models import Line, PiecewiseLinearCurve


class CaseTaken(models.TextChoices):
    M_CLASS = 'm_class', '𝓜 포락선'
    L_CLASS = 'l_class', '𝓛 포락선'
    FALLBACK_GD = 'fallback_gd', 'max{g^D, 0}'
    FALLBACK_F1_F2 = 'fallback_f1_f2', 'max{f1, f2, 0}'
    FALLBACK_F1 = 'fallback_f1', 'max{f1, 0}'


@dataclass(frozen=True)
class PutClassification:
    """
    직선 집합 분류

    Fields:
        n: 호가 수 N
        L_members: {(i, j): f_{i,j}} - 𝓛 = 𝓛₀ ∩ 𝓛_D
        M_members: {(i, j): f_{i,j}} - 𝓜 = 𝓜₀ ∩ 𝓛_D
        I_L, J_L, I_M, J_M: 각 집합의 최소 i / 최대 j (비어 있으면 None)
        fD, fD_index: f^D 와 f^D_J = f^D 인 J (동률이면 가장 큰 인덱스)
        gD, gD_index: g^D 와 g^D_I = g^D 인 I (동률이면 가장 큰 인덱스)
    """
    n: int
    L_members: dict
    M_members: dict
    I_L: int | None
    J_L: int | None
    I_M: int | None
    J_M: int | None
    fD: Line
    fD_index: int
    gD: Line
    gD_index: int

    @property
    def min_L_slope(self):
        if not self.L_members:
            return None
        return min(line.slope for line in self.L_members.values())

    def distinct_lines(self, members):
        """같은 직선은 하나만 (처음 나온 tag 유지)"""
        seen = {}
        for pair in sorted(members):
            line = members[pair]
            seen.setdefault((line.slope, line.intercept), line)
        return list(seen.values())


@dataclass(frozen=True)
class DivergenceReport:
    """
    ∫ curve / K² 의 발산 진단

    warning 은 발산은 아니지만 알려야 할 상태 (예: 콜 곡선의 양의 상수 꼬리).
    """
    diverges: bool
    reason: str | None = None
    line_tag: str | None = None
    warning: str | None = None

    def as_dict(self):
        return {
            'diverges': self.diverges,
            'reason': self.reason,
            'line_tag': self.line_tag,
            'warning': self.warning,
        }


@dataclass(frozen=True)
class PutCurveResult:
    curve: PiecewiseLinearCurve
    case_taken: CaseTaken
    classification: PutClassification
    f0: Line | None
    divergence: DivergenceReport
    excluded_strikes: tuple = field(default_factory=tuple)

    @property
    def diverges(self):
        return self.divergence.diverges


@dataclass(frozen=True)
class FilterOutcome:
    """이상치 필터 결과: 걸러진 체인, 제외 행사가, 제외 반복 횟수, 최종 곡선"""
    chain: object
    excluded_strikes: tuple
    iterations: int
    result: PutCurveResult
