"""
Cboe 방식 벤치마크 결과 타입
"""
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from apps.core.exceptions import PreconditionError
from apps.core.utils import get_setting

FORWARD_INESTIMABLE = 'forward inestimable'
BENCHMARK_INCALCULABLE = 'benchmark incalculable'


@dataclass(frozen=True)
class BenchmarkConfig:
    """
    호가 선택 규칙

    midpoint 는 (bid + ask)/2 로 고정.
    """
    consecutive_zero_bid_limit: int = 2

    def __post_init__(self):
        if self.consecutive_zero_bid_limit < 1:
            raise PreconditionError("연속 0 매수호가 한도는 1 이상이어야 합니다.")

    @classmethod
    def from_settings(cls):
        return cls(consecutive_zero_bid_limit=get_setting('ZERO_BID_LIMIT'))


@dataclass(frozen=True)
class EligibleQuote:
    """합산에 들어가는 호가: 행사가, Q(K), ΔK, 종류 ('P', 'C', K★ 는 'P/C')"""
    strike: Decimal
    mid: Fraction
    delta_k: Fraction
    side: str

    def as_dict(self):
        return {'strike': self.strike, 'side': self.side, 'Q': self.mid, 'delta_k': self.delta_k}


@dataclass(frozen=True)
class BenchmarkResult:
    label: str
    maturity: Decimal
    forward: Fraction
    parity_strike: Decimal
    k_star: Decimal
    eligible: tuple[EligibleQuote, ...]
    total_variance: Fraction

    def as_dict(self):
        return {
            'label': self.label,
            'maturity': self.maturity,
            'forward': self.forward,
            'k_star': self.k_star,
            'total_variance': self.total_variance,
            'eligible_count': len(self.eligible),
        }


@dataclass(frozen=True)
class BenchmarkIndexResult:
    """
    벤치마크 지수

    실패하면 index_level 은 None 이고 failed_reason / failed_stage / failed_label 이 채워진다.
    """
    target_days: int
    results: tuple[BenchmarkResult, ...] = field(default_factory=tuple)
    interpolated_variance: float | None = None
    index_level: float | None = None
    extrapolated: bool = False
    failed_reason: str | None = None
    failed_stage: str | None = None
    failed_label: str | None = None

    @property
    def failed(self):
        return self.failed_reason is not None

    def as_dict(self):
        return {
            'target_days': self.target_days,
            'interpolated_variance': self.interpolated_variance,
            'index': self.index_level,
            'extrapolated': self.extrapolated,
            'failed_reason': self.failed_reason,
            'failed_stage': self.failed_stage,
            'failed_label': self.failed_label,
            'maturities': [result.as_dict() for result in self.results],
        }
