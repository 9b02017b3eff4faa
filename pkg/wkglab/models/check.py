PASS = 'PASS'
FAIL = 'FAIL'
SKIP = 'SKIP'


class CheckResult(object):
    """Outcome of one property check, with what was measured."""

    def __init__(self, name, status, measured=None, threshold=None, note=''):
        self.name = name
        self.status = status
        self.measured = measured if measured is not None else {}
        self.threshold = threshold
        self.note = note

    @classmethod
    def judge(cls, name, passed, measured=None, threshold=None, note=''):
        return cls(name, PASS if passed else FAIL, measured=measured,
                   threshold=threshold, note=note)

    @classmethod
    def skipped(cls, name, note):
        return cls(name, SKIP, note=note)

    @property
    def passed(self):
        return self.status != FAIL

    def __repr__(self):
        return '<CheckResult {0} {1}>'.format(self.name, self.status)
