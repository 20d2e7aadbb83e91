"""Access to the VESSEL settings dictionary."""

from django.conf import settings


def setting(name):
    """Return a VESSEL setting by name."""
    try:
        return settings.VESSEL[name]
    except KeyError:
        raise KeyError(f'Unknown VESSEL setting {name!r}') from None


def or_setting(value, name):
    """Return value, or the named setting when value is None."""
    return setting(name) if value is None else value
