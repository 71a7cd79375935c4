// Copyright 2026 The Stackrel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKREL_SPECIAL_FUNCTIONS_H_
#define STACKREL_SPECIAL_FUNCTIONS_H_

namespace stackrel {

// log I_v(x), the modified Bessel function of the first kind, for v >= 0 and
// finite x >= 0. Returns -inf at x == 0 for v > 0. For x <= 50 the ascending
// power series is summed directly; above that the large-argument expansion
// is used when it converges to full precision, otherwise the same power
// series is summed in log scale around its largest term.
// Throws ValidationError for negative or non-finite arguments.
double LogBesselI(double order, double x);

// I_{v+1}(x) / I_v(x).
double BesselRatio(double order, double x);

}  // namespace stackrel

#endif  // STACKREL_SPECIAL_FUNCTIONS_H_
