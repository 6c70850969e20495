# Class group action backends (toy shift and CSIDH)
