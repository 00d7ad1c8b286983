from setmember.main import main

main()
