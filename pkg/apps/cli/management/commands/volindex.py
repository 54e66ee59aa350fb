from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from apps.cli.forms import COMMANDS, FORMATS, RunConfigForm
from apps.cli.utils import (
    CURVE_COLUMNS,
    EXIT_IO,
    EXIT_VALIDATION,
    build_benchmark,
    build_compare,
    build_curve,
    build_filter,
    build_index,
    build_validate,
    export_curves_to_excel,
    render_csv,
)
from apps.core.encoders import dumps
from apps.core.exceptions import DegenerateMaturityError, PreconditionError
from apps.quotes.utils import has_violations, parse_snapshot, serialize_snapshots, validate_snapshot

EXIT_MESSAGES = {
    2: '입력 검증 실패',
    3: '제안 방식 적분 발산',
    4: '벤치마크 계산 불가',
}


class Command(BaseCommand):
    help = '옵션 호가 CSV 로 곡선 구성, 변동성 지수, 벤치마크 비교를 실행합니다.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='호가 CSV 경로')
        parser.add_argument('--command', dest='action', choices=COMMANDS, default='index', help='실행할 명령')
        parser.add_argument('--target-days', type=int, default=None, help='목표 만기(일)')
        parser.add_argument('--no-filter', action='store_true', help='이상치 필터 끄기')
        parser.add_argument('--format', dest='output_format', choices=FORMATS, default=None, help='출력 형식')
        parser.add_argument('--grid', type=int, default=None, help='곡선 격자 점 수')
        parser.add_argument('--certificates', action='store_true', help='validate 에서 증명서 출력')
        parser.add_argument('--deep', action='store_true', help='validate 에서 곡선 성질 점검 결과 출력')
        parser.add_argument('--output', default=None, help='출력 파일 경로 (xlsx 는 필수)')
        parser.add_argument('--label', default=None, help='이 label 의 스냅샷만 사용')

    def handle(self, *args, **options):
        form = RunConfigForm(data={
            'input': options['input'],
            'command': options['action'],
            'target_days': options['target_days'],
            'apply_filter': not options['no_filter'],
            'format': options['output_format'],
            'grid': options['grid'],
            'certificates': options['certificates'],
            'deep': options['deep'],
            'output': options['output'],
            'label': options['label'],
        })
        if not form.is_valid():
            messages = [message for errors in form.errors.values() for message in errors]
            raise CommandError(' / '.join(messages), returncode=EXIT_VALIDATION)
        config = form.cleaned_data

        snapshots = self._load(config)
        command = config['command']

        try:
            if command == 'validate':
                document, exit_code = build_validate(
                    snapshots, certificates=config['certificates'], deep=config['deep'],
                )
                self._emit_json(document, config)
                return self._finish(exit_code)

            self._require_structurally_valid(snapshots)

            if command == 'curve':
                document, rows, exit_code = build_curve(snapshots, config['grid'], config['apply_filter'])
                if config['format'] == 'csv':
                    self._emit_text(render_csv(CURVE_COLUMNS, rows), config)
                elif config['format'] == 'xlsx':
                    Path(config['output']).write_bytes(export_curves_to_excel(rows).getvalue())
                else:
                    self._emit_json(document, config)
            elif command == 'filter':
                document, filtered, exit_code = build_filter(snapshots)
                if config['format'] == 'csv':
                    self._emit_text(serialize_snapshots(filtered), config)
                else:
                    self._emit_json(document, config)
            elif command == 'index':
                document, exit_code = build_index(snapshots, config['target_days'], config['apply_filter'])
                self._emit_json(document, config)
            elif command == 'benchmark':
                document, exit_code = build_benchmark(snapshots, config['target_days'])
                self._emit_json(document, config)
            else:
                document, exit_code = build_compare(snapshots, config['target_days'], config['apply_filter'])
                self._emit_json(document, config)
        except (PreconditionError, DegenerateMaturityError) as e:
            raise CommandError(str(e), returncode=EXIT_VALIDATION)

        return self._finish(exit_code)

    # === 입출력 ===

    def _load(self, config):
        try:
            text = Path(config['input']).read_text(encoding='utf-8')
        except OSError as e:
            raise CommandError(f"입력 파일을 읽을 수 없습니다: {e}", returncode=EXIT_IO)

        try:
            snapshots = parse_snapshot(text)
        except ValidationError as e:
            raise CommandError(' / '.join(e.messages), returncode=EXIT_IO)

        if config['label']:
            snapshots = [s for s in snapshots if s.label == config['label']]
            if not snapshots:
                raise CommandError(f"label '{config['label']}' 스냅샷이 없습니다.", returncode=EXIT_VALIDATION)
        return snapshots

    def _require_structurally_valid(self, snapshots):
        for snapshot in snapshots:
            report = validate_snapshot(snapshot)
            if has_violations(report):
                first = next(v for violations in report.values() for v in violations)
                raise CommandError(
                    f"[{snapshot.label}] 구조 검증 실패: {first.message}",
                    returncode=EXIT_VALIDATION,
                )

    def _emit_json(self, document, config):
        self._emit_text(dumps(document) + '\n', config)

    def _emit_text(self, text, config):
        if config['output']:
            try:
                Path(config['output']).write_text(text, encoding='utf-8')
            except OSError as e:
                raise CommandError(f"출력 파일을 쓸 수 없습니다: {e}", returncode=EXIT_IO)
        else:
            self.stdout.write(text, ending='')

    def _finish(self, exit_code):
        if exit_code:
            raise CommandError(EXIT_MESSAGES[exit_code], returncode=exit_code)
