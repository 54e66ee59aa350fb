"""
volindex 명령 실행 설정 폼
"""
from django import forms

from apps.core.utils import get_setting

COMMANDS = ('validate', 'curve', 'index', 'benchmark', 'compare', 'filter')
FORMATS = ('json', 'csv', 'xlsx')

# csv / xlsx 를 지원하는 명령
TABULAR_COMMANDS = {
    'csv': ('curve', 'filter'),
    'xlsx': ('curve',),
}


class RunConfigForm(forms.Form):
    """명령행 옵션 검증 (RunConfig)"""

    input = forms.CharField(label='입력 CSV 경로')

    command = forms.ChoiceField(
        label='명령',
        choices=[(name, name) for name in COMMANDS],
    )

    target_days = forms.IntegerField(
        label='목표 만기(일)',
        required=False,
        help_text='비우면 설정값 TARGET_DAYS',
    )

    apply_filter = forms.BooleanField(label='이상치 필터 적용', required=False)

    format = forms.ChoiceField(
        label='출력 형식',
        choices=[(name, name) for name in FORMATS],
        required=False,
    )

    grid = forms.IntegerField(label='곡선 격자 점 수', required=False)

    certificates = forms.BooleanField(label='차익거래 증명서 출력', required=False)

    deep = forms.BooleanField(label='곡선 성질 점검 출력', required=False)

    output = forms.CharField(label='출력 파일 경로', required=False)

    label = forms.CharField(label='스냅샷 label', required=False)

    def clean_target_days(self):
        """목표 만기 검증"""
        target_days = self.cleaned_data.get('target_days')
        if target_days is None:
            return get_setting('TARGET_DAYS')

        if target_days < 1:
            raise forms.ValidationError('목표 만기는 1일 이상이어야 합니다.')
        return target_days

    def clean_grid(self):
        """격자 점 수 검증"""
        grid = self.cleaned_data.get('grid')
        if grid is None:
            return get_setting('CURVE_GRID')

        if grid < 2:
            raise forms.ValidationError('격자 점 수는 2 이상이어야 합니다.')
        return grid

    def clean_format(self):
        return self.cleaned_data.get('format') or get_setting('DEFAULT_FORMAT')

    def clean(self):
        cleaned_data = super().clean()
        command = cleaned_data.get('command')
        output_format = cleaned_data.get('format')

        if output_format in TABULAR_COMMANDS and command not in TABULAR_COMMANDS[output_format]:
            supported = ', '.join(TABULAR_COMMANDS[output_format])
            raise forms.ValidationError(
                f'{output_format} 형식은 {supported} 명령에서만 지원합니다.'
            )

        if output_format == 'xlsx' and not cleaned_data.get('output'):
            raise forms.ValidationError('xlsx 형식은 --output 경로가 필요합니다.')

        return cleaned_data
