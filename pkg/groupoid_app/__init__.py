"""有限离散群胚计算应用"""
