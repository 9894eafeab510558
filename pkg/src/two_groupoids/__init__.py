"""2-groupoid calculus: bigon groupoids, actions, reconstruction and bibundle composition"""
