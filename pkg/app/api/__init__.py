# Command handlers (argparse front end lives in main.py)
