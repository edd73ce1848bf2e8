#ifndef CORE_MATHX_H
#define CORE_MATHX_H

#define SQUARE(x) ((x) * (x))
#define CLAMP(v, lo, hi) ((v) < (lo) ? (lo) : ((v) > (hi) ? (hi) : (v)))
#define MATHX_EPSILON 1e-9

int clampi(int v, int lo, int hi);
double lerpf(double a, double b, double t);
long sum_range(int lo, int hi);
int gcd(int a, int b);

#endif
