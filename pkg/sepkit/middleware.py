import hashlib
import json
import jsonschema
import logging

from .schema import request_schema, response_schema, schema_for


class InputError(Exception): pass
class ResponseError(Exception): pass


class Middleware(object):
    """
    Reads and validates input documents for a command, and validates and
    serializes the document it produces.
    """
    def __init__(self, logger=None):
        if logger is None:
            logger = logging.getLogger('sepkit')
        self.logger = logger

    def process_request(self, command, path, context, method_name='run'):
        try:
            with open(path, 'rb') as handle:
                body = handle.read()
        except (IOError, OSError) as error:
            raise InputError('Could not read {0}: {1}'.format(path, error))
        if not body:
            raise InputError('Empty input file {0}; a valid JSON document is required'.format(path))

        context['digest'] = hashlib.sha256(body).hexdigest()
        try:
            context[request_schema.context_key] = json.loads(body.decode('utf-8'))
        except (ValueError, UnicodeDecodeError):
            raise InputError('Malformed JSON in {0}: the document was incorrect or not encoded as UTF-8'.format(path))

        schema = schema_for(command, request_schema, method_name)
        if schema is not None:
            try:
                jsonschema.validate(context[request_schema.context_key], schema)
            except jsonschema.exceptions.ValidationError as error:
                raise InputError('Invalid input document {0}: {1}'.format(path, error.message))

    def process_response(self, command, context, method_name='run'):
        if response_schema.context_key not in context:
            return
        result = context[response_schema.context_key]

        schema = schema_for(command, response_schema, method_name)
        if schema is not None:
            try:
                jsonschema.validate(result, schema)
            except jsonschema.exceptions.ValidationError as error:
                self.logger.error('Blocking proposed output of {0}.{1}.{2} as it does not match the defined schema: {3}'.format(command.__module__, command.__class__.__name__, method_name, str(error)))
                raise ResponseError('Output document does not match its schema')

        try:
            context['body'] = json.dumps(result, indent=2, sort_keys=True, allow_nan=False)
        except ValueError as error:
            self.logger.error('Output of {0}.{1} holds a non-finite number: {2}'.format(command.__class__.__name__, method_name, error))
            raise ResponseError('Output document holds a non-finite number')
