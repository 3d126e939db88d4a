// Copyright 2026 The fleetreloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FLEETRELOC_PARALLEL_H_
#define FLEETRELOC_PARALLEL_H_

#include <functional>

namespace fleetreloc {

// Calls fn(0) .. fn(n - 1) on up to `workers` threads; workers <= 1 runs
// inline in index order. The first exception thrown is rethrown after every
// started call has returned.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace fleetreloc

#endif  // FLEETRELOC_PARALLEL_H_
