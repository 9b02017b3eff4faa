from lima import fields, Schema

from ..models.scattering import CACHE_QUANTITIES


class Raw(fields.Field):
    """Lists and dicts, dumped as they are."""


class GridSchema(Schema):
    n = fields.Integer()
    length = fields.Float()


class NormSnapshotSchema(Schema):
    family = fields.String()
    value = fields.Float()
    combine = fields.String()
    order_cap = Raw()
    skipped_orders = Raw()
    breakdown = Raw()


class NormDetailSchema(NormSnapshotSchema):
    detail = Raw()


class CheckResultSchema(Schema):
    name = fields.String()
    status = fields.String()
    measured = Raw()
    threshold = Raw()
    note = fields.String()


class ContractionEntrySchema(Schema):
    iteration = fields.Integer(key='iteration')
    distance = fields.Float(key='distance')
    ratio = Raw(key='ratio')
    residual_wa = Raw(key='residual_wa')
    residual_kg = Raw(key='residual_kg')


class ContractionLogSchema(Schema):
    entries = fields.Embed(schema=ContractionEntrySchema, many=True)
    final_distance = Raw()


class ResidualReportSchema(Schema):
    times = Raw()
    r_wa = Raw()
    r_kg = Raw()
    r_kg_uncorrected = Raw()
    eps = fields.Float()
    trend_start = fields.Float()
    decreasing = Raw()
    slope = Raw()
    envelope_constant = Raw()


class CacheManifestSchema(Schema):
    grid = fields.Embed(schema=GridSchema)
    times = Raw()
    t_max = fields.Float()
    tails = Raw()
    quantities = Raw(get=lambda cache: list(CACHE_QUANTITIES))


class RunManifestSchema(Schema):
    command = Raw(key='command')
    version = Raw(key='version')
    grid = fields.Embed(schema=GridSchema, key='grid')
    config = Raw(key='config')
    data = Raw(key='data')
    outputs = Raw(key='outputs')
    exit_code = Raw(key='exit_code')
