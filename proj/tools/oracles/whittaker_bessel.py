"""Whittaker W and K_{iu} reference tables, computed with mpmath at 30 digits.

Run from the repository root: python3 tools/oracles/whittaker_bessel.py
"""
from mpmath import mp, mpc, whitw, besselk

mp.dps = 30
out=open('tests/data/whittaker_cases.txt','w')
cases=[]
# pricing family: kappa, eta, z
for kap in [-1.3,-1.2,-1.5,-0.3,0.5,0.8,1.3,1.5,1.75,2.0,-0.25]:
  for eta in [0.001,0.3,0.5,1.0,2.0,5.0,12.0,25.0,45.0,70.0]:
    for z in [0.0013,0.01,0.1,0.5,1,2.5,8,16.7,50,200,1000]:
      cases.append((kap,0.0,eta,z))
# real mu
for kap in [-1.3,0.5,1.3,0.8]:
  for mu in [0.125,0.5,0.3,1.0,1.5,0.7]:
    for z in [0.01,0.3,1,2.8,8,30]:
      cases.append((kap,mu,0.0,z))
for kap,mr,mi,z in cases:
  mu=mpc(mr,mi)
  w=whitw(kap,mu,z)
  out.write('%r %r %r %r %s %s\n'%(kap,mr,mi,z,mp.nstr(w.real,20),mp.nstr(w.imag,20)))
out.close()
out=open('tests/data/bessel_k_cases.txt','w')
for u in [0,0.5,1,2,5,10,20,30,40,53,80,120]:
  for z in [0.001,0.01,0.05,0.3,1,3,8,21,40,100,300]:
    k=besselk(mpc(0,u),z)
    out.write('%r %r %s\n'%(u,z,mp.nstr(k.real,20)))
out.close()
