class StructuredException(Exception):
    exit_code = 1

    def __init__(self, name=None, message="You want override this error!"):
        Exception.__init__(self)
        self.message = message
        self.name = name

    def __str__(self):
        return self.to_dict()['msg']

    def to_dict(self):
        rv = dict()
        msg = ''
        if self.name:
            msg = '{0}: {1}'.format(self.message, self.name)
        else:
            msg = self.message

        rv['msg'] = msg
        rv['exit_code'] = self.exit_code
        return rv


class ConfigurationError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Invalid configuration"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class ShapeError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Array shape does not match the grid"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class RangeError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Dyadic shell is not resolvable on this grid"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class DomainError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Index pair is outside the admissible set"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class UnsupportedPhaseError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Phase case is not tabulated"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class AccuracyError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Quadrature did not converge"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class CostGuardError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Grid too large for the brute-force oracle"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class InputError(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Required input is missing or malformed"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class MissingArtifact(StructuredException):
    exit_code = 2

    def __init__(self, name=None, message="Artifact does not exist"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name


class BlowUpError(StructuredException):
    exit_code = 3

    def __init__(self, name=None, message="Solution blew up", last_good_time=None, dump_path=None):
        StructuredException.__init__(self)
        self.message = message
        self.name = name
        self.last_good_time = last_good_time
        self.dump_path = dump_path

    def to_dict(self):
        rv = StructuredException.to_dict(self)
        rv['last_good_time'] = self.last_good_time
        rv['dump_path'] = self.dump_path
        return rv


class NonContractionError(StructuredException):
    exit_code = 4

    def __init__(self, name=None, message="Fixed-point iteration is not contracting", log_path=None):
        StructuredException.__init__(self)
        self.message = message
        self.name = name
        self.log_path = log_path

    def to_dict(self):
        rv = StructuredException.to_dict(self)
        rv['log_path'] = self.log_path
        return rv


class VerifyFailure(StructuredException):
    exit_code = 5

    def __init__(self, name=None, message="Property suite reported failures"):
        StructuredException.__init__(self)
        self.message = message
        self.name = name
