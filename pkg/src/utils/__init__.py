# Utility modules: configuration, data models, errors
