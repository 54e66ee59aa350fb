"""
테스트용 합성 시장

- point_mass_market: 정수 격자 위 점질량 혼합 분포의 정확한 유리수 가격 + 비음수 스프레드
- lognormal_market: 로그정규 만기 분포(Black 공식)의 조밀한 체인
- corrupt_chain: 매수호가 인상 / 매도호가 인하로 차익거래를 심은 체인

두 생성기 모두 참값이 [bid, ask] 안에 들어가도록 틱 단위로 바깥쪽 반올림한다.
매도호가는 참값보다 최소 1틱 크다.
"""
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from fractions import Fraction

import numpy as np
from scipy.stats import norm

from apps.quotes.models import MarketSnapshot, Quote, QuoteChain, Side

POINT_MASS_TICK = Fraction(1, 10 ** 8)
LOGNORMAL_TICK = Decimal('1E-10')


def _to_decimal(value):
    """틱 배수 Fraction → Decimal (정확)"""
    return Decimal(value.numerator) / Decimal(value.denominator)


def _floor_tick(value, tick):
    return math.floor(value / tick) * tick


def _ceil_tick(value, tick):
    return math.ceil(value / tick) * tick


def _point_mass_quote(rng, strike, price):
    bid = max(_floor_tick(price, POINT_MASS_TICK) - int(rng.integers(0, 4)) * POINT_MASS_TICK, Fraction(0))
    ask = _ceil_tick(price, POINT_MASS_TICK) + (1 + int(rng.integers(0, 4))) * POINT_MASS_TICK
    return Quote(strike=Decimal(strike), bid=_to_decimal(bid), ask=_to_decimal(ask))


def point_mass_market(rng, n_strikes, label='synthetic', maturity=Decimal('0.1')):
    """
    점질량 혼합 분포로 만든 차익거래 없는 스냅샷

    P(K) = D·Σ w·(K − s)⁺, C(K) = D·Σ w·(s − K)⁺ 를 Fraction 으로 정확히 계산한다.

    Args:
        rng: numpy.random.Generator
        n_strikes: 행사가 수 N
        label: 스냅샷 label
        maturity: 연 단위 만기

    Returns:
        MarketSnapshot (풋/콜 같은 행사가)
    """
    step = int(rng.integers(1, 6))
    grid_size = 3 * n_strikes + 4
    strikes = sorted(
        int(k) * step for k in rng.choice(np.arange(1, grid_size), size=n_strikes, replace=False)
    )

    n_atoms = int(rng.integers(1, 5))
    atoms = [int(s) * step for s in rng.integers(1, grid_size + 2, size=n_atoms)]
    raw = [int(w) for w in rng.integers(1, 10, size=n_atoms)]
    weights = [Fraction(w, sum(raw)) for w in raw]

    discount = Fraction(int(rng.integers(900, 1001)), 1000)

    def put_price(k):
        return discount * sum((w * max(k - s, 0) for s, w in zip(atoms, weights)), Fraction(0))

    def call_price(k):
        return discount * sum((w * max(s - k, 0) for s, w in zip(atoms, weights)), Fraction(0))

    return MarketSnapshot(
        label=label,
        maturity=maturity,
        discount=_to_decimal(discount),
        put_chain=QuoteChain(Side.PUT, tuple(_point_mass_quote(rng, k, put_price(k)) for k in strikes)),
        call_chain=QuoteChain(Side.CALL, tuple(_point_mass_quote(rng, k, call_price(k)) for k in strikes)),
    )


def black_prices(strikes, forward, sigma, maturity, discount):
    """Black 공식 풋/콜 가격 (numpy 배열)"""
    strikes = np.asarray(strikes, dtype=float)
    width = sigma * math.sqrt(maturity)
    d1 = (np.log(forward / strikes) + 0.5 * width ** 2) / width
    d2 = d1 - width
    puts = discount * (strikes * norm.cdf(-d2) - forward * norm.cdf(-d1))
    calls = discount * (forward * norm.cdf(d1) - strikes * norm.cdf(d2))
    return np.maximum(puts, 0.0), np.maximum(calls, 0.0)


def _outward_quote(strike, price, spread):
    half = price * spread / 2
    bid = Decimal(repr(max(price - half, 0.0))).quantize(LOGNORMAL_TICK, rounding=ROUND_FLOOR)
    ask = Decimal(repr(price + half)).quantize(LOGNORMAL_TICK, rounding=ROUND_CEILING) + LOGNORMAL_TICK
    return Quote(strike=strike, bid=bid, ask=ask)


def lognormal_market(
    label='lognormal',
    sigma=0.2,
    days=30,
    rate=0.01,
    forward=1000.0,
    spacing=0.0025,
    width_sd=8,
    spread=0.0002,
    days_per_year=365,
):
    """
    로그정규 만기 분포의 조밀한 스냅샷

    행사가는 F·exp(k·spacing) 를 0.01 단위로 반올림한 값이고 ±width_sd 표준편차를 덮는다.
    상대 스프레드는 spread 이며 호가는 1e-10 틱으로 바깥쪽 반올림한다.
    """
    maturity = days / days_per_year
    discount = round(math.exp(-rate * maturity), 10)
    half_width = math.ceil(width_sd * sigma * math.sqrt(maturity) / spacing)

    strikes = sorted({
        Decimal(repr(forward * math.exp(k * spacing))).quantize(Decimal('0.01'))
        for k in range(-half_width, half_width + 1)
    })
    puts, calls = black_prices([float(k) for k in strikes], forward, sigma, maturity, discount)

    return MarketSnapshot(
        label=label,
        maturity=Decimal(days) / Decimal(days_per_year),
        discount=Decimal(repr(discount)),
        put_chain=QuoteChain(Side.PUT, tuple(
            _outward_quote(k, float(p), spread) for k, p in zip(strikes, puts)
        )),
        call_chain=QuoteChain(Side.CALL, tuple(
            _outward_quote(k, float(c), spread) for k, c in zip(strikes, calls)
        )),
    )


def corrupt_chain(rng, chain, n_corruptions):
    """
    임의의 호가 n 개를 망가뜨린 체인

    매수호가를 최대 2배 매도호가까지 올리거나 매도호가를 매수호가 아래로 내린다.
    bid ≤ ask 는 유지한다 (넘어가면 둘을 같게 맞춤).
    """
    quotes = list(chain.quotes)
    tick = Decimal('1E-8')
    for index in rng.choice(len(quotes), size=min(n_corruptions, len(quotes)), replace=False):
        quote = quotes[int(index)]
        factor = Decimal(repr(float(rng.uniform(0, 2)))).quantize(tick)
        if rng.random() < 0.5:
            bid = (quote.ask * factor).quantize(tick, rounding=ROUND_FLOOR)
            quotes[int(index)] = Quote(quote.strike, bid, max(bid, quote.ask))
        else:
            ask = (quote.bid * factor / 2).quantize(tick, rounding=ROUND_CEILING)
            quotes[int(index)] = Quote(quote.strike, min(quote.bid, ask), ask)
    return QuoteChain(chain.side, tuple(quotes))
