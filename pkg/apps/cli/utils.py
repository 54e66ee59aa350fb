"""
volindex 명령의 문서 생성과 출력

각 build_* 함수는 (문서, 종료 코드) 를 돌려준다.
문서는 dict (json) 또는 행 목록 (csv / xlsx) 이다.
"""
import csv
import io
import logging

import openpyxl

from apps.arbitrage.utils import certificate_for, check_snapshot
from apps.benchmark.utils import benchmark_index, relative_divergence
from apps.callcurve.utils import construct_call_curve, verify_call_postconditions
from apps.core.exceptions import FilterFailureError
from apps.core.utils import get_setting, to_fraction
from apps.putcurve.utils import construct_put_curve, filter_anomalies, verify_put_postconditions
from apps.quotes.utils import has_violations, validate_snapshot
from apps.varindex.utils import expected_qv, proposed_index, select_maturity_pair

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_BENCHMARK = 4
EXIT_IO = 5

CURVE_COLUMNS = ['label', 'side', 'K', 'value', 'segment_tag']


# ========================================
# 1. validate
# ========================================

def _postcondition_section(snapshot):
    """필터 없이 만든 풋/콜 곡선의 성질 점검 결과"""
    put = construct_put_curve(snapshot.put_chain, snapshot.discount)
    call = construct_call_curve(snapshot.call_chain, snapshot.discount)
    return {
        'put': {
            'case': put.case_taken.value,
            'failed': verify_put_postconditions(put, snapshot.put_chain, snapshot.discount),
        },
        'call': {
            'case': call.case_taken.value,
            'failed': verify_call_postconditions(call, snapshot.call_chain, snapshot.discount),
        },
    }


def build_validate(snapshots, certificates=False, deep=False):
    """
    구조 검증 + 필요조건 점검

    구조 위반이 있는 스냅샷은 필요조건 점검을 건너뛴다. 구조 위반이 하나라도 있으면 종료 코드 2.
    deep 이면 곡선 성질 점검 결과 ('postconditions') 도 붙인다.
    """
    document = {}
    exit_code = EXIT_OK

    for snapshot in snapshots:
        report = validate_snapshot(snapshot)
        entry = {
            'structural': {
                scope: [violation.as_dict() for violation in violations]
                for scope, violations in report.items()
            },
        }

        if has_violations(report):
            exit_code = EXIT_VALIDATION
            entry['deep'] = None
        else:
            violations = check_snapshot(snapshot)
            entry['deep'] = [violation.as_dict() for violation in violations]
            if certificates:
                entry['certificates'] = [
                    certificate_for(violation, snapshot.chain(violation.side), snapshot.discount).as_dict()
                    for violation in violations
                ]
            if deep:
                entry['postconditions'] = _postcondition_section(snapshot)

        document[snapshot.label] = entry

    return document, exit_code


# ========================================
# 2. curve
# ========================================

def _curve_section(result, rows):
    return {
        'case': result.case_taken.value,
        'divergence': result.divergence.as_dict(),
        'points': [{'K': k, 'value': value, 'segment_tag': tag} for k, value, tag in rows],
    }


def build_curve(snapshots, grid, apply_filter=True):
    """
    스냅샷별 풋/콜 곡선 표본

    격자 상단은 최대 행사가 × CURVE_GRID_SPAN. 분기점은 모두 포함된다.

    Returns:
        tuple: ({label: {...}}, 행 목록, 종료 코드)
    """
    span = to_fraction(get_setting('CURVE_GRID_SPAN'))
    document = {}
    rows = []

    for snapshot in snapshots:
        variance = expected_qv(snapshot, apply_filter=apply_filter)
        strikes = [q.strike for q in snapshot.put_chain] + [q.strike for q in snapshot.call_chain]
        hi = to_fraction(max(strikes)) * span

        put_rows = variance.put_result.curve.grid(grid, hi)
        call_rows = variance.call_result.curve.grid(grid, hi)

        document[snapshot.label] = {
            'excluded_strikes': list(variance.excluded_strikes),
            'put': _curve_section(variance.put_result, put_rows),
            'call': _curve_section(variance.call_result, call_rows),
        }
        for side, side_rows in (('P', put_rows), ('C', call_rows)):
            rows.extend([snapshot.label, side, k, value, tag] for k, value, tag in side_rows)

    return document, rows, EXIT_OK


# ========================================
# 3. index / benchmark / compare
# ========================================

def build_index(snapshots, target_days, apply_filter=True):
    """제안 지수 (발산이면 종료 코드 3)"""
    result = proposed_index(snapshots, target_days=target_days, apply_filter=apply_filter)
    exit_code = EXIT_OK if result.interpolated_variance.is_finite else EXIT_DIVERGENCE
    return result.as_dict(), exit_code


def build_benchmark(snapshots, target_days):
    """벤치마크 지수 (계산 불가면 종료 코드 4)"""
    near, far, _ = select_maturity_pair(snapshots, target_days=target_days)
    result = benchmark_index(near, far, target_days=target_days)
    return result.as_dict(), EXIT_BENCHMARK if result.failed else EXIT_OK


def build_compare(snapshots, target_days, apply_filter=True):
    """두 방식과 상대 괴리 (항상 종료 코드 0)"""
    near, far, _ = select_maturity_pair(snapshots, target_days=target_days)
    proposed = proposed_index(snapshots, target_days=target_days, apply_filter=apply_filter)
    benchmark = benchmark_index(near, far, target_days=target_days)

    document = {
        'proposed': proposed.as_dict(),
        'benchmark': benchmark.as_dict(),
        'relative_divergence': relative_divergence(proposed.index_level, benchmark.index_level),
    }
    return document, EXIT_OK


# ========================================
# 4. filter
# ========================================

def build_filter(snapshots):
    """
    스냅샷별 이상치 필터 결과

    Returns:
        tuple: ({label: {...}}, 필터 적용 스냅샷 목록, 종료 코드)
    """
    document = {}
    filtered = []

    for snapshot in snapshots:
        result = construct_put_curve(snapshot.put_chain, snapshot.discount)
        if not result.classification.M_members:
            document[snapshot.label] = {
                'applicable': False,
                'excluded_strikes': [],
                'iterations': 0,
                'diverges': result.diverges,
            }
            filtered.append(snapshot)
            continue

        try:
            outcome = filter_anomalies(snapshot.put_chain, snapshot.discount)
        except FilterFailureError as e:
            document[snapshot.label] = {
                'applicable': True,
                'excluded_strikes': list(e.excluded_strikes),
                'iterations': e.iterations,
                'failed_reason': str(e),
            }
            filtered.append(snapshot.with_put_chain(e.chain))
            continue

        f0 = outcome.result.f0
        document[snapshot.label] = {
            'applicable': True,
            'excluded_strikes': list(outcome.excluded_strikes),
            'iterations': outcome.iterations,
            'f0': None if f0 is None else {'slope': f0.slope, 'intercept': f0.intercept},
            'diverges': outcome.result.diverges,
        }
        filtered.append(snapshot.with_put_chain(outcome.chain))

    return document, filtered, EXIT_OK


# ========================================
# 5. 출력
# ========================================

def render_csv(header, rows):
    output = io.StringIO()
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(value) for value in row])
    return output.getvalue()


def _csv_cell(value):
    if isinstance(value, str):
        return value
    return repr(float(value))


def export_curves_to_excel(rows):
    """
    곡선 표본을 5열 엑셀로 내보내기

    Returns:
        BytesIO
    """
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "curves"

    ws.append(CURVE_COLUMNS)
    for label, side, k, value, tag in rows:
        # 엑셀 호환을 위해 float 로
        ws.append([label, side, float(k), float(value), tag])

    output = io.BytesIO()
    wb.save(output)
    output.seek(0)
    return output
