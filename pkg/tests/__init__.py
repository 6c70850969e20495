# Test suite for the identity blind signature toolkit
