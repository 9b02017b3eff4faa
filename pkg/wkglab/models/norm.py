from ..lib.errors import ConfigurationError


class NormParams(object):
    """
    Exponent tables of the norm families. N(n) = N0 - d n and
    H(n) = H0 - 200 n, both extended affinely to negative n.
    """

    def __init__(self, n0=40, n1=3, d=10, delta=1e-10, h0=800, h_step=200,
                 order=1, order_cap=2):
        if order > order_cap:
            raise ConfigurationError(name='{0} > {1}'.format(order, order_cap),
                                     message="Vector field order exceeds the cap")
        self.n0 = n0
        self.n1 = n1
        self.d = d
        self.delta = delta
        self.h0 = h0
        self.h_step = h_step
        self.order = order
        self.order_cap = order_cap

    @classmethod
    def from_config(cls, config):
        return cls(n0=config.get('NORM_N0', 40),
                   n1=config.get('NORM_N1', 3),
                   d=config.get('NORM_D', 10),
                   delta=config.get('NORM_DELTA', 1e-10),
                   order=config.get('VECTOR_FIELD_ORDER', 1),
                   order_cap=config.get('VECTOR_FIELD_ORDER_CAP', 2))

    def N(self, n):
        return self.n0 - self.d * n

    def H(self, n):
        return self.h0 - self.h_step * n

    def H2(self, n):
        """H''(n) = H(n + 1), shared by both families."""
        return self.H(n + 1)

    def N2(self, n):
        """N''(n) = N(n) - 5."""
        return self.N(n) - 5

    def to_dict(self):
        return {
            'n0': self.n0, 'n1': self.n1, 'd': self.d, 'delta': self.delta,
            'h0': self.h0, 'h_step': self.h_step, 'order': self.order,
            'order_cap': self.order_cap,
        }


class NormSnapshot(object):
    """
    A norm value with the suprema it was taken over. value is the max over
    breakdown entries, 0 when nothing contributed. Y and X are sums of
    suprema: their breakdown holds one supremum per summand, the entries
    behind each summand go to detail, and value is the sum.
    """

    COMBINE_RULES = ('max', 'sum')

    def __init__(self, family, breakdown=None, order_cap=None, skipped_orders=(),
                 combine='max', detail=None):
        if combine not in self.COMBINE_RULES:
            raise ConfigurationError(name=combine, message="Unknown combine rule")
        self.family = family
        self.breakdown = dict(breakdown or {})
        self.order_cap = order_cap
        self.skipped_orders = list(skipped_orders)
        self.combine = combine
        self.detail = dict(detail or {})

    @property
    def value(self):
        if not self.breakdown:
            return 0.0
        if self.combine == 'sum':
            return sum(self.breakdown.values())
        return max(self.breakdown.values())

    def record(self, key, value):
        value = float(value)
        if value > self.breakdown.get(key, float('-inf')):
            self.breakdown[key] = value

    def __repr__(self):
        return '<NormSnapshot {0} {1:.6e}>'.format(self.family, self.value)
