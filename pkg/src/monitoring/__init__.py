# Logging sinks and group-action instrumentation
