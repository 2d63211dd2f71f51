# Utils package for epikit
