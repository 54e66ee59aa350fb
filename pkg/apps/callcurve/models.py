"""
콜 가격곡선 구성 결과 타입
"""
from dataclasses import dataclass
from decimal import Decimal

from apps.putcurve.models import CaseTaken, DivergenceReport, PutClassification
from apps.pwl.models import Line, PiecewiseLinearCurve


@dataclass(frozen=True)
class CallClassification(PutClassification):
    """
    콜 쪽 분류 (𝓜′, 𝓛′)

    필드 의미는 PutClassification 과 같고 인덱스는 콜 체인 기준이다.
    fD 의 기울기는 −D.
    """


@dataclass(frozen=True)
class CallCurveResult:
    curve: PiecewiseLinearCurve
    case_taken: CaseTaken
    classification: CallClassification
    f0: Line | None
    divergence: DivergenceReport
    c_star: Decimal

    @property
    def diverges(self):
        return self.divergence.diverges
