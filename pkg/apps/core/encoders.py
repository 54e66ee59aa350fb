"""
JSON 직렬화

DjangoJSONEncoder 는 Decimal 을 문자열로 내보내므로 숫자로 바꿔 출력한다.
무한대는 문서에 들어가지 않는다 (allow_nan=False 로 강제).
"""
import json
from decimal import Decimal
from fractions import Fraction

from django.core.serializers.json import DjangoJSONEncoder


class VolIndexJSONEncoder(DjangoJSONEncoder):

    def default(self, o):
        if isinstance(o, (Fraction, Decimal)):
            return float(o)
        return super().default(o)


def dumps(document):
    return json.dumps(
        document,
        cls=VolIndexJSONEncoder,
        allow_nan=False,
        ensure_ascii=False,
        indent=2,
    )
