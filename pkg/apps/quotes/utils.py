"""
호가 스냅샷 입출력과 구조 검증

CSV 형식 (헤더 필수, UTF-8):
    label,maturity_years,discount,side,strike,bid,ask
"""
import csv
import io
import logging
from decimal import Decimal

from django.core.exceptions import ValidationError

from apps.core.utils import to_decimal
from .models import ChainViolation, MarketSnapshot, Quote, QuoteChain, Side

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['label', 'maturity_years', 'discount', 'side', 'strike', 'bid', 'ask']


def _parse_row(row, row_number):
    """
    CSV 한 행 파싱

    Returns:
        tuple: (파싱 결과 dict, 에러메시지)
        - 성공 시: (dict, None)
        - 실패 시: (None, str)
    """
    # 1. 누락 컬럼 (DictReader 는 모자란 칸을 None 으로 채움)
    missing = [name for name in CSV_COLUMNS if row.get(name) in (None, '')]
    if missing:
        return None, f"{row_number}행: 컬럼 누락 ({', '.join(missing)})"

    if None in row:
        return None, f"{row_number}행: 컬럼 수가 헤더보다 많습니다."

    # 2. 숫자 필드
    numbers = {}
    for name in ('maturity_years', 'discount', 'strike', 'bid', 'ask'):
        value = to_decimal(row[name])
        if value is None:
            return None, f"{row_number}행: {name} 값이 숫자가 아닙니다 ({row[name]!r})"
        numbers[name] = value

    # 3. 옵션 종류
    side = row['side'].strip().upper()
    if side not in Side.values:
        return None, f"{row_number}행: side 는 P 또는 C 여야 합니다 ({row['side']!r})"

    # 4. 값 범위
    if numbers['strike'] <= 0:
        return None, f"{row_number}행: 행사가는 0보다 커야 합니다 ({numbers['strike']})"
    if numbers['bid'] > numbers['ask']:
        return None, (
            f"{row_number}행: 매수호가가 매도호가보다 큽니다 "
            f"(bid {numbers['bid']} > ask {numbers['ask']})"
        )
    if numbers['maturity_years'] <= 0:
        return None, f"{row_number}행: 만기는 0보다 커야 합니다."
    if not (Decimal('0') < numbers['discount'] <= Decimal('1')):
        return None, f"{row_number}행: 할인계수는 (0, 1] 범위여야 합니다."

    return {
        'label': row['label'].strip(),
        'side': Side(side),
        **numbers,
    }, None


def parse_snapshot(csv_text):
    """
    CSV 텍스트를 MarketSnapshot 목록으로 변환

    label 별로 스냅샷 하나를 만들고 (처음 등장한 순서 유지), 호가는 행사가 순으로 정렬한다.
    행 단위 에러를 모두 모은 뒤 ValidationError 하나로 올린다.

    Raises:
        ValidationError: 헤더 누락, 잘못된 행, 중복 행사가 등
    """
    reader = csv.DictReader(io.StringIO(csv_text))

    if reader.fieldnames is None:
        return []

    header = [name.strip() for name in reader.fieldnames]
    missing_columns = [name for name in CSV_COLUMNS if name not in header]
    if missing_columns:
        raise ValidationError(f"1행: 헤더에 필수 컬럼이 없습니다 ({', '.join(missing_columns)})")
    reader.fieldnames = header

    error_list = []
    groups = {}   # label -> {'maturity', 'discount', 'P': {strike: Quote}, 'C': {...}}

    for row_number, row in enumerate(reader, start=2):
        # 빈 행 스킵
        if not any((value or '').strip() for key, value in row.items() if key is not None):
            continue

        parsed, error = _parse_row(row, row_number)
        if error:
            error_list.append(error)
            continue

        group = groups.setdefault(parsed['label'], {
            'maturity': parsed['maturity_years'],
            'discount': parsed['discount'],
            Side.PUT: {},
            Side.CALL: {},
        })

        if (group['maturity'] != parsed['maturity_years']
                or group['discount'] != parsed['discount']):
            error_list.append(
                f"{row_number}행: 같은 label({parsed['label']})의 만기/할인계수가 일치하지 않습니다."
            )
            continue

        quotes = group[parsed['side']]
        if parsed['strike'] in quotes:
            error_list.append(
                f"{row_number}행: 중복 행사가 ({parsed['label']}, {parsed['side'].value}, {parsed['strike']})"
            )
            continue

        quotes[parsed['strike']] = Quote(
            strike=parsed['strike'],
            bid=parsed['bid'],
            ask=parsed['ask'],
        )

    if error_list:
        logger.info(f"스냅샷 파싱 실패: 에러 {len(error_list)}건")
        raise ValidationError(error_list)

    snapshots = []
    for label, group in groups.items():
        snapshots.append(MarketSnapshot(
            label=label,
            maturity=group['maturity'],
            discount=group['discount'],
            put_chain=QuoteChain(
                side=Side.PUT,
                quotes=tuple(sorted(group[Side.PUT].values(), key=lambda q: q.strike)),
            ),
            call_chain=QuoteChain(
                side=Side.CALL,
                quotes=tuple(sorted(group[Side.CALL].values(), key=lambda q: q.strike)),
            ),
        ))

    logger.debug(f"스냅샷 {len(snapshots)}개 파싱 완료")
    return snapshots


def serialize_snapshots(snapshots):
    """parse_snapshot 의 역연산 (풋 → 콜, 행사가 순)"""
    output = io.StringIO()
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)

    for snapshot in snapshots:
        for chain in (snapshot.put_chain, snapshot.call_chain):
            for quote in chain:
                writer.writerow([
                    snapshot.label,
                    str(snapshot.maturity),
                    str(snapshot.discount),
                    chain.side.value,
                    str(quote.strike),
                    str(quote.bid),
                    str(quote.ask),
                ])

    return output.getvalue()


def validate_chain(chain):
    """
    체인 구조 검증 (순수 함수)

    보고 항목:
        - ordering: 행사가가 엄격히 증가하지 않음
        - non_positive_strike: 행사가 ≤ 0
        - negative_price: 매수/매도 호가 < 0
        - bid_above_ask: 매수호가 > 매도호가
        - zero_quote: 매수 = 매도 = 0 (곡선 구성에 쓸 수 없는 호가)

    Returns:
        list[ChainViolation]: 비어 있으면 구조적으로 허용되는 체인
    """
    violations = []

    if len(chain) == 0:
        violations.append(ChainViolation('empty', None, None, '체인이 비어 있습니다.'))
        return violations

    previous = None
    for index, quote in enumerate(chain.quotes, start=1):
        if previous is not None and quote.strike <= previous:
            violations.append(ChainViolation(
                'ordering', index, quote.strike,
                f"{index}번째 행사가 {quote.strike} 가 이전 행사가 {previous} 보다 크지 않습니다.",
            ))
        previous = quote.strike

        if quote.strike <= 0:
            violations.append(ChainViolation(
                'non_positive_strike', index, quote.strike,
                f"행사가 {quote.strike} 는 0보다 커야 합니다.",
            ))

        if quote.bid < 0 or quote.ask < 0:
            violations.append(ChainViolation(
                'negative_price', index, quote.strike,
                f"행사가 {quote.strike}: 음수 호가 (bid {quote.bid}, ask {quote.ask})",
            ))

        if quote.bid > quote.ask:
            violations.append(ChainViolation(
                'bid_above_ask', index, quote.strike,
                f"행사가 {quote.strike}: 매수호가 {quote.bid} > 매도호가 {quote.ask}",
            ))
        elif quote.bid == 0 and quote.ask == 0:
            violations.append(ChainViolation(
                'zero_quote', index, quote.strike,
                f"행사가 {quote.strike}: 매수·매도 호가가 모두 0 입니다.",
            ))

    return violations


def validate_snapshot(snapshot):
    """
    스냅샷 전체 구조 검증

    Returns:
        dict: {'snapshot': [...], 'put': [...], 'call': [...]} (ChainViolation 목록)
    """
    snapshot_violations = []
    if snapshot.maturity <= 0:
        snapshot_violations.append(ChainViolation(
            'maturity', None, None, f"만기 {snapshot.maturity} 는 0보다 커야 합니다.",
        ))
    if not (0 < snapshot.discount <= 1):
        snapshot_violations.append(ChainViolation(
            'discount', None, None, f"할인계수 {snapshot.discount} 는 (0, 1] 범위여야 합니다.",
        ))

    report = {
        'snapshot': snapshot_violations,
        'put': validate_chain(snapshot.put_chain),
        'call': validate_chain(snapshot.call_chain),
    }
    return report


def has_violations(report):
    return any(report.values())
