"""
Django settings for the vessel reconstruction project.

Every numerical default of the toolkit lives in the VESSEL dictionary
below and can be overridden through the environment.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


def env_float(name, default):
    """Read a float from the environment."""
    return float(os.environ.get(name, default))


def env_int(name, default):
    """Read an integer from the environment."""
    return int(os.environ.get(name, default))


def env_tuple(name, default):
    """Read a comma separated tuple of floats from the environment."""
    raw = os.environ.get(name)
    if not raw:
        return tuple(default)
    return tuple(float(part) for part in raw.split(','))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'changeme')

DEBUG = bool(int(os.environ.get('DEBUG', 0)))

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'calibrate',
    'skeleton',
    'register',
    'implicit',
    'support',
    'synth',
    'pipeline',
]

# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('DB_PATH', str(BASE_DIR / 'db.sqlite3')),
    }
}

# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

PROJECT_LOGGERS = [
    'core', 'calibrate', 'skeleton', 'register',
    'implicit', 'support', 'synth', 'pipeline',
]

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for name in PROJECT_LOGGERS
    },
}

# Geometry toolkit defaults. Lengths are millimetres.

VESSEL = {
    'WELD_TOLERANCE_MM': env_float('WELD_TOLERANCE_MM', 1e-4),
    'HULL_DEGENERACY_EPS': env_float('HULL_DEGENERACY_EPS', 1e-9),
    'CIRCLE_MAX_ITERATIONS': env_int('CIRCLE_MAX_ITERATIONS', 50),
    'CIRCLE_STEP_TOLERANCE_MM': env_float('CIRCLE_STEP_TOLERANCE_MM', 1e-10),
    'SEGMENTS': env_int('SEGMENTS', 128),
    'ALIGN_THETA_STEPS': env_int('ALIGN_THETA_STEPS', 360),
    'ALIGN_DZ_STEPS': env_int('ALIGN_DZ_STEPS', 100),
    'ALIGN_DZ_RANGE_MM': env_tuple('ALIGN_DZ_RANGE_MM', (-20.0, 20.0)),
    'ALIGN_MAX_SAMPLES': env_int('ALIGN_MAX_SAMPLES', 1000),
    'ALIGN_SURFACE_SPACING_MM': env_float('ALIGN_SURFACE_SPACING_MM', 0.5),
    'ICP_MAX_ITERATIONS': env_int('ICP_MAX_ITERATIONS', 50),
    'ICP_CONVERGENCE_MM': env_float('ICP_CONVERGENCE_MM', 1e-6),
    'ICP_REJECTION_FACTOR': env_float('ICP_REJECTION_FACTOR', 10.0),
    'NORMALS_K': env_int('NORMALS_K', 10),
    'POISSON_GRID': env_int('POISSON_GRID', 128),
    'POISSON_PADDING': env_float('POISSON_PADDING', 0.1),
    'POISSON_RTOL': env_float('POISSON_RTOL', 1e-6),
    'POISSON_MAX_ITERATIONS': env_int('POISSON_MAX_ITERATIONS', 5000),
    'SUPPORT_SHELL_MM': env_float('SUPPORT_SHELL_MM', 4.0),
    'SUPPORT_CLEARANCE_MM': env_float('SUPPORT_CLEARANCE_MM', 0.4),
    'SUPPORT_VOXEL_MM': env_float('SUPPORT_VOXEL_MM', 0.8),
    'SUPPORT_LABEL_DEPTH_MM': env_float('SUPPORT_LABEL_DEPTH_MM', 1.6),
    'SUPPORT_SMOOTH_ITERATIONS': env_int('SUPPORT_SMOOTH_ITERATIONS', 2),
    'SUPPORT_SMOOTH_LAMBDA': env_float('SUPPORT_SMOOTH_LAMBDA', 0.2),
    'BUILD_VOLUME_MM': env_tuple('BUILD_VOLUME_MM', (100.0, 100.0, 60.0)),
    'BUILD_MARGIN_MM': env_float('BUILD_MARGIN_MM', 2.0),
    'SPLIT_VOLUME_TOLERANCE': env_float('SPLIT_VOLUME_TOLERANCE', 0.005),
    'BAND_SPLIT_MIN_ALIGNMENT': env_float('BAND_SPLIT_MIN_ALIGNMENT', 0.5),
    'REPORT_VOLUME_DECIMALS': env_int('REPORT_VOLUME_DECIMALS', 1),
}
