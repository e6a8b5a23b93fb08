"""Akamai Resource Locators.

Grammar::

    http://a{serial}.{domain}/{type}/{serial}/{provider}/{object_data}/{absolute_url}

``absolute_url`` is everything after the fifth slash, kept verbatim.
"""
from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urlsplit

SCHEME = "http://"


class ArlError(ValueError):
    pass


class SchemeError(ArlError):
    pass


class MissingSegmentError(ArlError):
    pass


class SerialMismatchError(ArlError):
    def __init__(self, host_serial: str, path_serial: str):
        super().__init__(f"serial mismatch: {host_serial} != {path_serial}")
        self.host_serial = host_serial
        self.path_serial = path_serial


@dataclass(frozen=True)
class Arl:
    serial: str
    akamai_domain: str
    type_field: str
    provider_code: str
    object_data: str
    absolute_url: str
    path_serial: str | None = None  # only set when a lenient parse saw a different value

    def serialize(self) -> str:
        return (f"{SCHEME}a{self.serial}.{self.akamai_domain}/{self.type_field}/"
                f"{self.path_serial or self.serial}/{self.provider_code}/"
                f"{self.object_data}/{self.absolute_url}")

    __str__ = serialize

    def fields(self) -> dict:
        return {
            "serial": self.serial,
            "akamai_domain": self.akamai_domain,
            "type_field": self.type_field,
            "provider_code": self.provider_code,
            "object_data": self.object_data,
            "absolute_url": self.absolute_url,
        }


def parse_arl(text: str, lenient: bool = False) -> Arl:
    """Split an ARL into its six fields.

    With ``lenient`` a hostname serial that differs from the path serial is
    accepted and the path value kept on ``path_serial``.
    """
    if not text.startswith(SCHEME):
        raise SchemeError(f"ARL must start with {SCHEME!r}")
    rest = text[len(SCHEME):]
    parts = rest.split("/", 5)
    names = ("host", "type", "serial", "provider code", "object data", "absolute URL")
    for name, part in zip(names, parts):
        if not part:
            raise MissingSegmentError(f"empty {name} segment")
    if len(parts) < 6:
        raise MissingSegmentError(f"missing {names[len(parts)]} segment")
    host, type_field, path_serial, provider, object_data, absolute = parts
    if not host.startswith("a") or "." not in host:
        raise MissingSegmentError("host must look like a<serial>.<domain>")
    host_serial, domain = host[1:].split(".", 1)
    if not host_serial or not domain:
        raise MissingSegmentError("host must look like a<serial>.<domain>")
    if not host_serial.isdigit() or not path_serial.isdigit():
        raise ArlError("serial numbers must be decimal digits")
    if "/" not in absolute:
        raise MissingSegmentError("absolute URL needs a host and a path")
    if host_serial != path_serial:
        if not lenient:
            raise SerialMismatchError(host_serial, path_serial)
        return Arl(host_serial, domain, type_field, provider, object_data, absolute, path_serial)
    return Arl(host_serial, domain, type_field, provider, object_data, absolute)


def akamaize(origin_url: str, serial, domain: str, type_field, provider_code,
             object_data: str) -> str:
    """Rewrite an origin URL into an ARL; the origin scheme is dropped."""
    split = urlsplit(origin_url)
    if split.scheme:
        absolute = origin_url[len(split.scheme) + 3:] if split.netloc else ""
    else:
        absolute = origin_url
    if not absolute or "/" not in absolute or absolute.startswith("/"):
        raise ArlError("origin URL needs a host and a path")
    values = {"serial": str(serial), "domain": domain, "type_field": str(type_field),
              "provider_code": str(provider_code), "object_data": object_data}
    for name, value in values.items():
        if not value:
            raise ArlError(f"{name} must be non-empty")
        if "/" in value:
            raise ArlError(f"{name} must not contain '/'")
    if not values["serial"].isdigit():
        raise ArlError("serial must be decimal digits")
    arl = Arl(values["serial"], domain, values["type_field"], values["provider_code"],
              object_data, absolute)
    return arl.serialize()


def serialize(arl: Arl) -> str:
    return arl.serialize()
