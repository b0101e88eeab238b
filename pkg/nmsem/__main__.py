from nmsem.cli import main

raise SystemExit(main())
