"""
공통 유틸리티: 설정 조회, 정확한 수 변환
"""
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from django.conf import settings


# settings.VOLINDEX 에 키가 없을 때 쓰는 기본값
VOLINDEX_DEFAULTS = {
    'TARGET_DAYS': 30,
    'DAYS_PER_YEAR': 365,
    'INTERPOLATION': 'total_variance',
    'FILTER_MAX_ITERATIONS': 10,
    'ZERO_BID_LIMIT': 2,
    'CURVE_GRID': 50,
    'CURVE_GRID_SPAN': '1.5',
    'DEFAULT_FORMAT': 'json',
}

INTERPOLATION_MODES = ('total_variance', 'annualized_variance')


def get_setting(name):
    """settings.VOLINDEX[name] 조회 (없으면 기본값)"""
    configured = getattr(settings, 'VOLINDEX', None) or {}
    return configured.get(name, VOLINDEX_DEFAULTS[name])


def resolve_setting(value, name):
    """명시적 인자가 None이면 설정값 사용"""
    return get_setting(name) if value is None else value


def to_decimal(value):
    """
    값을 Decimal로 변환 (실패 시 None)

    부동소수점 오차를 피하려고 문자열을 거쳐 변환하고, 반올림하지 않는다.
    """
    if value is None or str(value).strip() == '':
        return None

    try:
        decimal_value = Decimal(str(value).strip())
    except (InvalidOperation, ValueError, TypeError):
        return None

    if not decimal_value.is_finite():
        return None
    return decimal_value


def to_fraction(value):
    """Decimal/int/Fraction/str 을 정확한 유리수로"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(Decimal(value))
    return Fraction(value)
