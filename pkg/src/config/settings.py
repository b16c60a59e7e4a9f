"""
Application configuration settings
"""
import os


class Config:
    """Base configuration"""

    # File format
    FORMAT_VERSION = 1

    # Exhaustive search caps (environment overrides only change the defaults)
    EXHAUSTIVE_CAP = int(os.getenv('DELTAKIT_EXHAUSTIVE_CAP', '20'))
    DOUBLE_EXACT_SET_CAP = int(os.getenv('DELTAKIT_DOUBLE_EXACT_SET_CAP', '12'))
    DOUBLE_EXACT_BLOCK_CAP = int(os.getenv('DELTAKIT_DOUBLE_EXACT_BLOCK_CAP', '4'))
    PROPERTY_BASIS_CAP = int(os.getenv('DELTAKIT_PROPERTY_BASIS_CAP', '6'))
    PROPERTY_N_CAP = int(os.getenv('DELTAKIT_PROPERTY_N_CAP', '6'))
    CHAIN_CANDIDATE_CAP = int(os.getenv('DELTAKIT_CHAIN_CANDIDATE_CAP', '4096'))
    CHAIN_FAMILY_CAP = int(os.getenv('DELTAKIT_CHAIN_FAMILY_CAP', '50000'))
    PRODUCT_POINT_CAP = int(os.getenv('DELTAKIT_PRODUCT_POINT_CAP', '65536'))

    # Pipeline
    SUBSET_SIZE = int(os.getenv('DELTAKIT_SUBSET_SIZE', '4'))

    # Worker pool; output never depends on this
    WORKERS = int(os.getenv('DELTAKIT_WORKERS', '1'))

    # Logging goes to stderr, stdout is reserved for JSON
    LOG_LEVEL = os.getenv('DELTAKIT_LOG_LEVEL', 'WARNING')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Generator caps
    GEN_MAX_SETS = 10000
    GEN_MAX_GROUND = 4096
    GEN_MAX_BLOCKS = 256
    GEN_MAX_FACTORS = 64
    GEN_MAX_POINTS = 16
    GEN_MAX_BOXES = 10000
    GEN_PERTURB_ATTEMPTS = 8

    @classmethod
    def with_overrides(cls, **overrides):
        """Derive a configuration class with some attributes replaced"""
        overrides = {key: value for key, value in overrides.items() if value is not None}
        if not overrides:
            return cls
        return type(f"{cls.__name__}Override", (cls,), overrides)


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.getenv('DELTAKIT_LOG_LEVEL', 'INFO')


class ProductionConfig(Config):
    """Production configuration"""


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    WORKERS = 1
    LOG_LEVEL = 'CRITICAL'


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config(config_name=None):
    """Resolve a configuration class by name (falls back to DELTAKIT_ENV)"""
    config_name = config_name or os.getenv('DELTAKIT_ENV', 'default')
    return config.get(config_name, config['default'])
