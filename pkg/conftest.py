"""
공통 fixture

호가 CSV 원문과 파싱된 스냅샷. 숫자는 모두 정확한 10진수 문자열.
"""
from decimal import Decimal

import numpy as np
import pytest

from apps.quotes.models import Quote, QuoteChain, Side
from apps.quotes.utils import CSV_COLUMNS, parse_snapshot

HEADER = ','.join(CSV_COLUMNS)


def _rows(label, maturity, discount, side, quotes):
    return [f'{label},{maturity},{discount},{side},{k},{b},{a}' for k, b, a in quotes]


def _csv(*groups):
    lines = [HEADER]
    for group in groups:
        lines.extend(_rows(*group))
    return '\n'.join(lines) + '\n'


# 행사가 (10, 20, 30) 풋과 같은 호가를 뒤집은 (70, 80, 90) 콜
EXAMPLE_PUTS = [('10', '0.5', '1'), ('20', '2.5', '3'), ('30', '5.5', '6')]
EXAMPLE_CALLS = [('70', '5.5', '6'), ('80', '2.5', '3'), ('90', '0.5', '1')]
EXAMPLE_CSV = _csv(
    ('example', '0.1', '1', 'P', EXAMPLE_PUTS),
    ('example', '0.1', '1', 'C', EXAMPLE_CALLS),
)

# f0 가 상수 0.05 가 되는 풋 체인 (행사가 1475 가 이상치)
ANOMALY_PUTS = [
    ('1400', '0', '0.1'),
    ('1450', '0', '0.1'),
    ('1475', '0.05', '0.1'),
    ('1500', '0.05', '0.05'),
    ('1550', '0.10', '0.15'),
    ('1600', '0.30', '0.35'),
    ('1650', '0.70', '0.75'),
]
ANOMALY_CALLS = [
    ('1700', '20', '21'),
    ('1750', '8', '9'),
    ('1800', '2', '2.5'),
    ('1850', '0.2', '0.4'),
]
ANOMALY_CSV = _csv(
    ('anomaly', '0.0822', '1', 'P', ANOMALY_PUTS),
    ('anomaly', '0.0822', '1', 'C', ANOMALY_CALLS),
)

# 1400, 1450 매수호가도 0.05 인 변형 (세 호가가 한 번에 제외됨)
ANOMALY_VARIANT_PUTS = [('1400', '0.05', '0.1'), ('1450', '0.05', '0.1')] + ANOMALY_PUTS[2:]
ANOMALY_VARIANT_CSV = _csv(
    ('variant', '0.0822', '1', 'P', ANOMALY_VARIANT_PUTS),
    ('variant', '0.0822', '1', 'C', ANOMALY_CALLS),
)

# K★ 바로 위 콜 매수호가가 0 인 체인 ('next') + 정상 체인 ('near')
TERM_PUTS = [
    ('2500', '150', '170'),
    ('2525', '161', '182'),
    ('2550', '173', '195'),
    ('2575', '185', '208'),
    ('2600', '198', '221'),
]
TERM_CALLS = (
    [('2600', '188', '233')]
    + [(str(2605 + 5 * k), '0', str(Decimal('230') - Decimal('3.25') * k)) for k in range(13)]
    + [(str(2670 + 5 * k), '0', str(188 - 3 * k)) for k in range(10)]
    + [('2720', '115', '158'), ('2725', '0', '155'), ('2730', '0', '152')]
)
NEAR_CALLS = [
    ('2600', '188', '233'),
    ('2650', '150', '190'),
    ('2700', '120', '160'),
    ('2750', '95', '130'),
    ('2800', '70', '105'),
]
TERM_CSV = _csv(
    ('near', '0.0630', '1', 'P', TERM_PUTS),
    ('near', '0.0630', '1', 'C', NEAR_CALLS),
    ('next', '0.1014', '1', 'P', TERM_PUTS),
    ('next', '0.1014', '1', 'C', TERM_CALLS),
)

# p = max(0, K−1), c = max(0, 3−K)
SINGLE_QUOTE_CSV = _csv(
    ('single', '0.1', '1', 'P', [('2', '1', '1')]),
    ('single', '0.1', '1', 'C', [('2', '1', '1')]),
)


@pytest.fixture
def example_snapshot():
    return parse_snapshot(EXAMPLE_CSV)[0]


@pytest.fixture
def example_put_chain(example_snapshot):
    """행사가 (10, 20, 30), 매도 (1, 3, 6), 매수 (0.5, 2.5, 5.5)"""
    return example_snapshot.put_chain


@pytest.fixture
def example_call_chain(example_snapshot):
    return example_snapshot.call_chain


@pytest.fixture
def anomaly_snapshot():
    return parse_snapshot(ANOMALY_CSV)[0]


@pytest.fixture
def anomaly_variant_snapshot():
    return parse_snapshot(ANOMALY_VARIANT_CSV)[0]


@pytest.fixture
def term_snapshots():
    """(near, next) - next 의 콜 날개는 0 매수호가로 시작"""
    return tuple(parse_snapshot(TERM_CSV))


@pytest.fixture
def single_quote_snapshot():
    return parse_snapshot(SINGLE_QUOTE_CSV)[0]


@pytest.fixture
def make_chain():
    """(행사가, 매수, 매도) 문자열 튜플로 체인 만들기 (검증 없이)"""
    def factory(side, quotes):
        return QuoteChain(
            side=Side(side),
            quotes=tuple(Quote(Decimal(k), Decimal(b), Decimal(a)) for k, b, a in quotes),
        )
    return factory


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def write_input(tmp_path):
    """CSV 텍스트를 임시 파일로 쓰고 경로 반환"""
    def writer(text, name='quotes.csv'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return writer


@pytest.fixture
def csv_texts():
    """CLI 테스트용 CSV 원문"""
    return {
        'example': EXAMPLE_CSV,
        'term': TERM_CSV,
        'anomaly': ANOMALY_CSV,
        'variant': ANOMALY_VARIANT_CSV,
        'single': SINGLE_QUOTE_CSV,
    }
