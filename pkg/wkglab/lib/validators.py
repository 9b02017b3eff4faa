import os

from jsonschema import Draft4Validator
from yaml import load, Loader

from .errors import ConfigurationError


def get_config_spec(spec_path):
    with open(spec_path, 'r') as spec:
        return load(spec.read(), Loader)


def validate_run_config(doc):
    """
    Checks a run document against the RunConfig definition. Every
    violation is reported in one ConfigurationError.
    """
    errors = sorted(run_config_validator.iter_errors(doc),
                    key=lambda e: list(e.path))
    if errors:
        raise ConfigurationError(
            name='; '.join('{0}: {1}'.format(
                '/'.join(str(p) for p in e.path) or '<root>', e.message)
                for e in errors),
            message="Run config does not match the schema")
    return doc


dir_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
spec_path = os.path.join(dir_path, "run-config-spec.yaml")
spec_dict = get_config_spec(spec_path)
run_config_spec = spec_dict['definitions']['RunConfig']
run_config_validator = Draft4Validator(run_config_spec)
