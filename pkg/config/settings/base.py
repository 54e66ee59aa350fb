"""
Django settings for config project.
"""

from pathlib import Path
from dotenv import load_dotenv
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent  # settings 폴더 안이므로 parent 하나 더

load_dotenv(BASE_DIR / '.env')
# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = (
    os.environ.get("DJANGO_SECRET_KEY")
    or os.environ.get("SECRET_KEY")
    or "ci-dev-secret-key"
    )
DEBUG = os.environ.get("DEBUG", "0") == "1"

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    #내 앱들
    'apps.core',
    'apps.quotes',
    'apps.pwl',
    'apps.putcurve',
    'apps.callcurve',
    'apps.arbitrage',
    'apps.varindex',
    'apps.benchmark',
    'apps.cli',
]

# 영속 계층 없음 (스냅샷은 CSV로만 입력)
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'ko-kr'  # 한국어

TIME_ZONE = 'Asia/Seoul'  # 한국 시간

USE_I18N = True

USE_TZ = True


# 변동성 지수 계산 설정
# 모든 값은 VOLINDEX_<이름> 환경 변수로 덮어쓸 수 있음
VOLINDEX = {
    'TARGET_DAYS': int(os.environ.get('VOLINDEX_TARGET_DAYS', '30')),
    'DAYS_PER_YEAR': int(os.environ.get('VOLINDEX_DAYS_PER_YEAR', '365')),
    # 'total_variance' | 'annualized_variance'
    'INTERPOLATION': os.environ.get('VOLINDEX_INTERPOLATION', 'total_variance'),
    'FILTER_MAX_ITERATIONS': int(os.environ.get('VOLINDEX_FILTER_MAX_ITERATIONS', '10')),
    'ZERO_BID_LIMIT': int(os.environ.get('VOLINDEX_ZERO_BID_LIMIT', '2')),
    'CURVE_GRID': int(os.environ.get('VOLINDEX_CURVE_GRID', '50')),
    # 곡선 덤프 격자의 상단 = 최대 행사가 × 배수
    'CURVE_GRID_SPAN': os.environ.get('VOLINDEX_CURVE_GRID_SPAN', '1.5'),
    'DEFAULT_FORMAT': os.environ.get('VOLINDEX_DEFAULT_FORMAT', 'json'),
}


# 로깅 설정 (문서는 stdout, 로그는 stderr)
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '[{levelname}] {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': os.environ.get('VOLINDEX_LOG_LEVEL', 'INFO'),
        },
    },
}
