/*
 * Copyright (C) 2026 The gigi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

namespace gigi {

// Worker count for the OpenMP kernels. Every kernel writes disjoint output
// rows and reduces in a fixed order, so results do not depend on this value.
void set_thread_count(int threads);
int thread_count();

// Runs body(row) for row in [0, rows). Body must not throw.
template <class Body>
void parallel_rows(int rows, Body&& body) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int row = 0; row < rows; ++row) {
        body(row);
    }
}

} // namespace gigi
