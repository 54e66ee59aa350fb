"""
호가 체인 값 타입

- Quote: 행사가 하나의 매수/매도 호가
- QuoteChain: 한 만기, 한 옵션 종류(풋/콜)의 호가 묶음
- MarketSnapshot: 만기 하나의 풋/콜 체인 + 만기 + 할인계수

DB 테이블이 아니라 불변 값 객체이다. 생성 시점에 불변식을 강제하지 않으며,
구조 검증은 utils.validate_chain 이 위반 목록으로 보고한다.

인덱스 규약: 체인 안 호가의 인덱스는 1부터 시작한다 (K_1 < K_2 < ... < K_N).
"""
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property

from django.db import models


class Side(models.TextChoices):
    PUT = 'P', '풋'
    CALL = 'C', '콜'

    @property
    def opposite(self):
        return Side.CALL if self == Side.PUT else Side.PUT


@dataclass(frozen=True)
class Quote:
    strike: Decimal
    bid: Decimal
    ask: Decimal

    @property
    def mid(self):
        return (self.bid + self.ask) / 2


@dataclass(frozen=True)
class QuoteChain:
    side: Side
    quotes: tuple[Quote, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'quotes', tuple(self.quotes))

    def __len__(self):
        return len(self.quotes)

    def __iter__(self):
        return iter(self.quotes)

    # === 정확한 유리수 뷰 (0부터 시작하는 리스트) ===

    @cached_property
    def strikes(self):
        return tuple(Fraction(q.strike) for q in self.quotes)

    @cached_property
    def bids(self):
        return tuple(Fraction(q.bid) for q in self.quotes)

    @cached_property
    def asks(self):
        return tuple(Fraction(q.ask) for q in self.quotes)

    def strike_at(self, index):
        """1부터 시작하는 인덱스의 행사가"""
        return self.quotes[index - 1].strike

    def quote_for(self, strike):
        for quote in self.quotes:
            if quote.strike == strike:
                return quote
        return None

    def without(self, strikes):
        """주어진 행사가를 뺀 체인"""
        removed = set(strikes)
        return QuoteChain(
            side=self.side,
            quotes=tuple(q for q in self.quotes if q.strike not in removed),
        )


@dataclass(frozen=True)
class MarketSnapshot:
    label: str
    maturity: Decimal       # 연 단위 만기 T
    discount: Decimal       # 무이표채 가격 D
    put_chain: QuoteChain
    call_chain: QuoteChain

    def chain(self, side):
        return self.put_chain if side == Side.PUT else self.call_chain

    def with_put_chain(self, put_chain):
        return MarketSnapshot(
            label=self.label,
            maturity=self.maturity,
            discount=self.discount,
            put_chain=put_chain,
            call_chain=self.call_chain,
        )


@dataclass(frozen=True)
class ChainViolation:
    """구조 검증 위반 한 건"""
    kind: str
    index: int | None
    strike: Decimal | None
    message: str

    def as_dict(self):
        return {
            'kind': self.kind,
            'index': self.index,
            'strike': self.strike,
            'message': self.message,
        }
