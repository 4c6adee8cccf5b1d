from ferry_planner.cli import main

main()
