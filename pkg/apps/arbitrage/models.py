"""
차익거래 위반과 정적 포트폴리오 증명서
"""
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from django.db import models

from apps.quotes.models import Side


class ViolationKind(models.TextChoices):
    BUTTERFLY = 'butterfly', '버터플라이'
    VERTICAL_WITH_BOND = 'vertical_with_bond', '채권 포함 수직 스프레드'
    BOND_CAP = 'bond_cap', '채권 상한'
    G_LINE_INTERCEPT = 'g_line_intercept', 'g 직선 절편'


class InstrumentKind(models.TextChoices):
    PUT = 'put', '풋'
    CALL = 'call', '콜'
    BOND = 'bond', '무이표채'


@dataclass(frozen=True)
class Violation:
    """필요조건 위반 한 건 (indices 는 1부터)"""
    kind: ViolationKind
    side: Side
    indices: tuple[int, ...]
    strikes: tuple[Decimal, ...]
    message: str

    def as_dict(self):
        return {
            'kind': self.kind.value,
            'side': self.side.value,
            'indices': list(self.indices),
            'strikes': list(self.strikes),
            'message': self.message,
        }


@dataclass(frozen=True)
class Instrument:
    kind: InstrumentKind
    strike: Fraction | None = None

    def payoff(self, terminal):
        if self.kind == InstrumentKind.BOND:
            return Fraction(1)
        if self.kind == InstrumentKind.PUT:
            return max(self.strike - terminal, Fraction(0))
        return max(terminal - self.strike, Fraction(0))

    def __str__(self):
        if self.kind == InstrumentKind.BOND:
            return 'bond'
        return f'{self.kind.value}({self.strike})'


@dataclass(frozen=True)
class Position:
    """보유 수량과 체결 가격 (매수는 ask, 매도는 bid)"""
    instrument: Instrument
    quantity: Fraction
    bid: Fraction
    ask: Fraction

    @property
    def cost(self):
        if self.quantity > 0:
            return self.quantity * self.ask
        return self.quantity * self.bid


@dataclass(frozen=True)
class Portfolio:
    positions: tuple[Position, ...]

    @property
    def cost(self):
        """C(π) = Σ (π⁺·A − π⁻·B)"""
        return sum((position.cost for position in self.positions), Fraction(0))

    def value(self, terminal):
        """만기 가치 V(S_T)"""
        return sum(
            (position.quantity * position.instrument.payoff(terminal) for position in self.positions),
            Fraction(0),
        )


@dataclass(frozen=True)
class ArbitrageCertificate:
    """
    검증된 차익거래 포트폴리오

    Fields:
        violation: 근거가 된 위반
        portfolio: 정적 포트폴리오
        witness_states: 순가치 V − C/D 가 엄격히 양수인 만기 가격
        checked_states: 검증에 쓴 상태 격자
    """
    violation: Violation
    portfolio: Portfolio
    witness_states: tuple[Fraction, ...]
    checked_states: tuple[Fraction, ...]

    @property
    def kind(self):
        return self.violation.kind

    def as_dict(self):
        return {
            'violation': self.violation.as_dict(),
            'positions': [
                {'instrument': str(p.instrument), 'quantity': p.quantity}
                for p in self.portfolio.positions
            ],
            'cost': self.portfolio.cost,
            'witness_states': list(self.witness_states),
        }
