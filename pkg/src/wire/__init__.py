# Wire codecs, transcripts, transports and session runners
