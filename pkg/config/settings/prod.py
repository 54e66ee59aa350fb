from .base import *

DEBUG = False

# 배치 실행 시에는 경고 이상만 출력
LOGGING['loggers']['apps']['level'] = os.getenv('VOLINDEX_LOG_LEVEL', 'WARNING')
