"""
도메인 예외

발산(divergence)은 예외가 아니라 결과 데이터(ExtendedValue)로 다룬다.
여기 있는 예외는 사전조건 위반이나 내부 정합성 실패에만 쓴다.
"""


class VolIndexError(Exception):
    """도메인 예외 최상위"""


class DegenerateLineError(VolIndexError):
    """행사가가 같은 두 점으로 직선을 만들려고 함"""


class ContractViolationError(VolIndexError):
    """적분 구간 안에서 곡선 값이 음수"""


class PreconditionError(VolIndexError):
    """연산 사전조건 위반"""


class FilterFailureError(VolIndexError):
    """
    이상치 필터가 반복 한도 안에서 수렴하지 못함

    부분 결과(현재까지 걸러낸 체인, 제외 행사가, 반복 횟수)를 함께 담는다.
    """

    def __init__(self, message, *, chain, excluded_strikes, iterations):
        super().__init__(message)
        self.chain = chain
        self.excluded_strikes = excluded_strikes
        self.iterations = iterations


class CertificateVerificationError(VolIndexError):
    """차익거래 증명서의 비용/손익 검증 실패 (버그 신호)"""


class DegenerateMaturityError(VolIndexError):
    """보간에 쓰는 두 만기가 같음"""


class BenchmarkFailure(VolIndexError):
    """벤치마크(Cboe 방식) 계산 실패 - 실패 단계 이름을 함께 담음"""

    def __init__(self, reason, *, stage):
        super().__init__(f'{stage}: {reason}')
        self.reason = reason
        self.stage = stage
