# OR sigma protocol, identification scheme and blind signature
