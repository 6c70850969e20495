# Size tables, action counts and timing reports
