"""
공통 값 타입

- ExtendedValue: 유한 값 또는 +∞(발산 사유 포함)
"""
from dataclasses import dataclass


# 발산 사유 (JSON 출력에 그대로 노출됨)
POSITIVE_AT_ORIGIN = 'positive value at origin'
INVERSE_K_AT_ORIGIN = 'O(1/K) at origin'
LINEAR_GROWTH_AT_INFINITY = 'linear growth at infinity'


@dataclass(frozen=True)
class ExtendedValue:
    """
    확장 실수

    Fields:
        value: 유한 값 (발산이면 None)
        reason: 발산 사유
        side: 발산을 일으킨 쪽 ('put' / 'call')
    """
    value: float | None
    reason: str | None = None
    side: str | None = None

    @classmethod
    def finite(cls, value):
        return cls(value=float(value))

    @classmethod
    def diverged(cls, reason, side=None):
        return cls(value=None, reason=reason, side=side)

    @property
    def is_finite(self):
        return self.value is not None

    def scaled(self, factor):
        """유한 값에만 배수 적용, 발산은 그대로 전파"""
        if not self.is_finite:
            return self
        return ExtendedValue(value=self.value * float(factor), side=self.side)
