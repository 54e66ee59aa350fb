from .base import *

DEBUG = True

# 개발 환경 로깅 (상세하게)
LOGGING['loggers']['apps']['level'] = 'DEBUG'
