import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

loads = tomllib.loads
TOMLDecodeError = tomllib.TOMLDecodeError


def dumps(data: dict) -> str:
    return tomli_w.dumps(data, multiline_strings=True)
