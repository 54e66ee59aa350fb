"""
만기별 기대 이차변동과 보간 지수
"""
from dataclasses import dataclass, field
from decimal import Decimal

from apps.core.models import ExtendedValue


@dataclass(frozen=True)
class MaturityVariance:
    """
    만기 하나의 V(T) = (2/D)·∫ min{p, c} / K² dK

    Fields:
        label, maturity, discount: 스냅샷 정보
        total_variance: V(T) (발산이면 사유 포함)
        put_result, call_result: 곡선 구성 결과
        excluded_strikes: 이상치 필터가 뺀 풋 행사가
        filter_iterations: 필터 제외 반복 횟수 (필터를 안 돌렸으면 0)
    """
    label: str
    maturity: Decimal
    discount: Decimal
    total_variance: ExtendedValue
    put_result: object
    call_result: object
    excluded_strikes: tuple = field(default_factory=tuple)
    filter_iterations: int = 0

    @property
    def diverged(self):
        return not self.total_variance.is_finite

    def as_dict(self):
        return {
            'label': self.label,
            'maturity': self.maturity,
            'total_variance': self.total_variance.value,
            'diverged_reason': self.total_variance.reason,
            'diverged_side': self.total_variance.side if self.diverged else None,
            'excluded_strikes': list(self.excluded_strikes),
            'put_case': self.put_result.case_taken.value,
            'call_case': self.call_result.case_taken.value,
        }


@dataclass(frozen=True)
class IndexResult:
    """
    목표 만기 지수

    index_level = 100·sqrt(V★ / T★) (백분율 포인트). 정의되지 않으면 None 과 reason.
    """
    target_days: int
    interpolated_variance: ExtendedValue
    index_level: float | None
    inputs: tuple
    extrapolated: bool = False
    reason: str | None = None

    @property
    def is_defined(self):
        return self.index_level is not None

    def as_dict(self):
        return {
            'target_days': self.target_days,
            'interpolated_variance': self.interpolated_variance.value,
            'index': self.index_level,
            'index_reason': self.reason,
            'extrapolated': self.extrapolated,
            'maturities': [item.as_dict() for item in self.inputs],
        }
