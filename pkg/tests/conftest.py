import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile('default', deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    '''Record the one-line verdict of an acceptance criterion.'''
    lines = request.config.stash.setdefault(_LINES, {})

    def record(number, passed, detail):
        line = f'criterion {number}: {"PASS" if passed else "FAIL"}  {detail}'
        lines[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, None)
    if lines:
        terminalreporter.section('acceptance criteria')
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
