"""
Schemas for sepkit documents, and the decorators that attach them to
command methods.

A command reads its parsed input from context['doc'] and leaves its output
in context['result']; `request_schema` governs the first and
`response_schema` the second. The middleware looks both up with
`schema_for`.
"""
import inspect

class SchemaDecoratorError(Exception): pass

class _command_schema(object):
    kind        = None
    context_key = None

    def __init__(self, schema, method_name=None):
        self.schema         = schema
        self.method_name    = method_name

    def __call__(self, command_or_method):
        if inspect.isclass(command_or_method):
            if self.method_name is None:
                raise SchemaDecoratorError(
                    "Parameter 'method_name' must be supplied when applying {0} to a command class".format(type(self).__name__)
                )
            # copy, so a subclass never writes into its parent's table
            per_method = dict(getattr(command_or_method, _class_attribute(self.kind), {}))
            per_method[self.method_name] = self.schema
            setattr(command_or_method, _class_attribute(self.kind), per_method)
        else:
            setattr(command_or_method, _method_attribute(self.kind), self.schema)
        return command_or_method

class request_schema(_command_schema):
    """
    Schema that the parsed input document, context['doc'], must match before
    the command runs.
    """
    kind        = 'request'
    context_key = 'doc'

class response_schema(_command_schema):
    """
    Schema that context['result'] must match before it is serialized.
    """
    kind        = 'response'
    context_key = 'result'


def _method_attribute(kind):
    return '__{0}_schema__'.format(kind)

def _class_attribute(kind):
    return '__{0}_schemas__'.format(kind)

def schema_for(command, decorator, method_name='run'):
    """
    The schema `decorator` (request_schema or response_schema) attached to
    command.method_name: on the method itself first, then on the class.
    """
    if command is None:
        return None
    method = getattr(command, method_name, None)
    return getattr(method, _method_attribute(decorator.kind), None) \
        or getattr(command, _class_attribute(decorator.kind), {}).get(method_name)


COMPLEX_ENTRY = {
    'type':     'array',
    'items':    {'type': 'number'},
    'minItems': 2,
    'maxItems': 2,
}

COMPLEX_MATRIX = {
    'type':     'array',
    'minItems': 1,
    'items':    {'type': 'array', 'minItems': 1, 'items': COMPLEX_ENTRY},
}

REAL_VECTOR = {
    'type':     'array',
    'items':    {'type': 'number'},
    'minItems': 3,
    'maxItems': 3,
}

REAL_MATRIX = {'type': 'array', 'items': REAL_VECTOR, 'minItems': 3, 'maxItems': 3}

REAL_TENSOR = {'type': 'array', 'items': REAL_MATRIX, 'minItems': 3, 'maxItems': 3}

STATE_FILE_SCHEMA = {
    'type': 'object',
    'properties': {
        'qubits':       {'type': 'integer', 'minimum': 1, 'maximum': 3},
        'matrix':       COMPLEX_MATRIX,
        'coefficients': {
            'type': 'object',
            'properties': {
                't':    REAL_MATRIX,
                'g':    REAL_TENSOR,
                'r':    REAL_VECTOR,
                's':    REAL_VECTOR,
            },
            'additionalProperties': False,
        },
    },
    'required': ['qubits'],
    'oneOf': [
        {'required': ['matrix']},
        {'required': ['coefficients']},
    ],
}

VERIFICATION_SCHEMA = {
    'type': 'object',
    'properties': {
        'residual_max_abs':         {'type': 'number'},
        'weight_sum_error':         {'type': 'number'},
        'worst_factor_violation':   {'type': 'number'},
        'tolerance':                {'type': 'number'},
        'verdict':                  {'enum': ['pass', 'fail']},
    },
    'required': ['residual_max_abs', 'weight_sum_error', 'worst_factor_violation', 'tolerance', 'verdict'],
}

CERTIFICATE_SCHEMA = {
    'type': 'object',
    'properties': {
        'qubits':       {'type': 'integer', 'minimum': 1, 'maximum': 3},
        'frame_note':   {'type': ['string', 'null']},
        'terms': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'weight':   {'type': 'number', 'exclusiveMinimum': 0},
                    'factors':  {'type': 'array', 'items': COMPLEX_MATRIX, 'minItems': 1, 'maxItems': 3},
                },
                'required': ['weight', 'factors'],
            },
        },
        'verification': VERIFICATION_SCHEMA,
    },
    'required': ['qubits', 'terms'],
}

CRITERION_SCHEMA = {
    'type': 'object',
    'properties': {
        'name':         {'type': 'string'},
        'value':        {'type': 'number'},
        'threshold':    {'type': 'number'},
        'outcome':      {'enum': ['Separable', 'Entangled', 'Indeterminate']},
    },
    'required': ['name', 'value', 'threshold', 'outcome'],
}

PROVENANCE = {
    'tool':         {'type': 'string'},
    'version':      {'type': 'string'},
    'input_digest': {'type': 'string', 'pattern': '^[0-9a-f]{64}$'},
}

REPORT_SCHEMA = {
    'type': 'object',
    'properties': dict(PROVENANCE, **{
        'qubits':       {'type': 'integer', 'minimum': 1, 'maximum': 3},
        'verdict':      {'enum': ['Separable', 'Entangled', 'Indeterminate']},
        'criteria':     {'type': 'array', 'items': CRITERION_SCHEMA},
        'certificate':  {'oneOf': [{'type': 'null'}, CERTIFICATE_SCHEMA]},
        'notes':        {'type': 'array', 'items': {'type': 'string'}},
        'rotations':    {'oneOf': [{'type': 'null'}, REAL_TENSOR]},
    }),
    'required': ['tool', 'version', 'input_digest', 'qubits', 'verdict', 'criteria', 'certificate', 'notes'],
}

MINIMIZE_SCHEMA = {
    'type': 'object',
    'properties': dict(PROVENANCE, **{
        'before':           {'type': 'number', 'minimum': 0},
        'after':            {'type': 'number', 'minimum': 0},
        'angles':           {'type': 'array', 'items': {'type': 'number'}, 'minItems': 9, 'maxItems': 9},
        'sufficient_after': {'type': 'boolean'},
        'restarts':         {'type': 'integer', 'minimum': 1},
        'seed':             {'type': 'integer'},
    }),
    'required': ['tool', 'version', 'input_digest', 'before', 'after', 'angles', 'sufficient_after'],
}
