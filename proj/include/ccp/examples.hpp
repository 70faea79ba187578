#pragma once

// Ready-to-run problem-spec files shipped with the CLI (`--example NAME`).
// Every spec exercised by the acceptance suite is available here so results
// can be reproduced without hand-written files.

#include <string>
#include <vector>

namespace ccp::catalog {

struct ExampleSpec {
  std::string name;
  std::string description;
  std::string text;
};

inline const std::vector<ExampleSpec>& example_specs() {
  static const std::vector<ExampleSpec> specs = {
      {"wave",
       "constant-coefficient wave operator with travelling-wave reference",
       R"([equation]
a = 1
b = 0
c = -1
f = 0

[characteristics]
gamma1 = x2 - x1
gamma2 = x2 + x1
inverse.x1 = (y2 - y1)/2
inverse.x2 = (y1 + y2)/2

[domain]
kind = axis-rectangle
bounds = -2 2 -2 2

[reference]
u = sin(x2 - x1) + cos(x2 + x1)
)"},
      {"wave-forced",
       "wave operator with f = 1; u = x1^2/2 satisfies it",
       R"([equation]
a = 1
b = 0
c = -1
f = 1

[characteristics]
gamma1 = x2 - x1
gamma2 = x2 + x1
inverse.x1 = (y2 - y1)/2
inverse.x2 = (y1 + y2)/2

[domain]
kind = axis-rectangle
bounds = -2 2 -2 2

[reference]
u = x1^2/2
)"},
      {"dxdy-exp",
       "mixed-derivative operator with f = u and u = exp(x1+x2)",
       R"([equation]
a = 0
b = 0.5
c = 0
f = u

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = axis-rectangle
bounds = 0 1 0 1

[reference]
u = exp(x1 + x2)
)"},
      {"varspeed",
       "variable speed c = -x1^2 with parabolic characteristics",
       R"([equation]
a = 1
b = 0
c = -x1^2
f = -2*x1^2

[characteristics]
gamma1 = x2 - x1^2/2
gamma2 = x2 + x1^2/2
inverse.x1 = sqrt(y2 - y1)
inverse.x2 = (y1 + y2)/2

[domain]
kind = axis-rectangle
bounds = 0.5 1.5 0.5 1.5

[reference]
u = x1*x2 + x2^2
)"},
      {"varspeed-traced",
       "variable speed c = -x1^2 with numerically traced characteristics",
       R"([equation]
a = 1
b = 0
c = -x1^2
f = -2*x1^2

[characteristics]
trace.axis = x2
trace.levels = 0.5:0.25:1.5
trace.step = 0.03125
trace.grid = 33 33

[domain]
kind = axis-rectangle
bounds = 0.5 1.5 0.5 1.5
)"},
      {"parabolic-bad",
       "degenerate operator: hyperbolicity validation fails",
       R"([equation]
a = 1
b = 0
c = 0
f = 0

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = axis-rectangle
bounds = 0 1 0 1
)"},
      {"wrong-pair",
       "coordinate lines against the wave operator: residual check fails",
       R"([equation]
a = 1
b = 0
c = -1
f = 0

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = axis-rectangle
bounds = 0 1 0 1
)"},
      {"goursat-bilinear",
       "Goursat problem, manufactured u = x1*x2 (f = 0), speed 2",
       R"([equation]
a = 1
b = 0
c = -4
f = 0

[characteristics]
gamma1 = x2 - 2*x1
gamma2 = x2 + 2*x1
inverse.x1 = (y2 - y1)/4
inverse.x2 = (y1 + y2)/2

[domain]
kind = axis-rectangle
bounds = 0.05 2 -4 4

[solver]
kind = goursat-wave
speed = 2
phi1 = 2*t^2
phi2 = -2*t^2
f = 0

[reference]
u = x1*x2
)"},
      {"goursat-forced",
       "Goursat problem, manufactured u = x1^2*x2 (f = 2*x2), speed 1",
       R"([equation]
a = 1
b = 0
c = -1
f = 2*x2

[characteristics]
gamma1 = x2 - x1
gamma2 = x2 + x1
inverse.x1 = (y2 - y1)/2
inverse.x2 = (y1 + y2)/2

[domain]
kind = axis-rectangle
bounds = 0.05 2 -2 2

[solver]
kind = goursat-wave
speed = 1
phi1 = t^3
phi2 = -t^3
f = 2*x2

[reference]
u = x1^2*x2
)"},
      {"mixed-manufactured",
       "first mixed problem, manufactured u = x1^2 + x2^2, speed 2",
       R"([equation]
a = 1
b = 0
c = -4
f = -6

[characteristics]
gamma1 = x2 - 2*x1
gamma2 = x2 + 2*x1
inverse.x1 = (y2 - y1)/4
inverse.x2 = (y1 + y2)/2

[domain]
kind = quadrant
bounds = 2 2

[solver]
kind = mixed-wave
speed = 2
phi = t^2
psi = 0
mu = t^2
f = -6

[reference]
u = x1^2 + x2^2
)"},
      {"mixed-sine",
       "first mixed problem with sine data: u = sin(x2)cos(x1)",
       R"([equation]
a = 1
b = 0
c = -1
f = 0

[characteristics]
gamma1 = x2 - x1
gamma2 = x2 + x1
inverse.x1 = (y2 - y1)/2
inverse.x2 = (y1 + y2)/2

[domain]
kind = quadrant
bounds = 3 3

[solver]
kind = mixed-wave
speed = 1
phi = sin(t)
psi = 0
mu = 0
f = 0

[reference]
u = sin(x2)*cos(x1)
)"},
      {"darboux-const",
       "second Darboux problem, f = 1, linear case (alternating series)",
       R"([equation]
a = 0
b = 0.5
c = 0
f = 1

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = sector
bounds = 0.5 2 0 1.5

[solver]
kind = darboux
alpha = 0.5
beta = 2
lambda = 0
f = 1

[reference]
u = (x1 - x2/2)*(x2 - x1/2)/1.25
)"},
      {"darboux-semilinear",
       "second Darboux problem with lambda g = 0.1 u (fixed-point grid)",
       R"([equation]
a = 0
b = 0.5
c = 0
f = 1 - 0.1*u

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = sector
bounds = 0.5 2 0 1.3

[solver]
kind = darboux
alpha = 0.5
beta = 2
lambda = 0.1
f = 1
g = u
L1 = 0
L2 = 1
x1_max = 1.3
)"},
      {"goursat-linear-pure",
       "linear Goursat with zero lower-order terms (one Picard iteration)",
       R"([equation]
a = 0
b = 0.5
c = 0
f = 1

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = axis-rectangle
bounds = 0 1 0 1

[solver]
kind = goursat-linear
corner = 0 0
extent = 1 1
a_lo = 0
b_lo = 0
c_lo = 0
f = 1
phi = t^2
psi = t^3
grid = 65 65
)"},
      {"goursat-linear-exp",
       "linear Goursat, manufactured u = exp(x1+x2) with c_lo = 1",
       R"([equation]
a = 0
b = 0.5
c = 0
f = 2*exp(x1 + x2) - u

[characteristics]
gamma1 = x1
gamma2 = x2
inverse.x1 = y1
inverse.x2 = y2

[domain]
kind = axis-rectangle
bounds = 0 1 0 1

[solver]
kind = goursat-linear
corner = 0 0
extent = 1 1
a_lo = 0
b_lo = 0
c_lo = 1
f = 2*exp(x1 + x2)
phi = exp(t)
psi = exp(t)
grid = 129 129

[reference]
u = exp(x1 + x2)
)"},
  };
  return specs;
}

inline const ExampleSpec* find_example(const std::string& name) {
  for (const ExampleSpec& e : example_specs())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace ccp::catalog
