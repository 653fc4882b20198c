from fieldnet.cli import main

main()
