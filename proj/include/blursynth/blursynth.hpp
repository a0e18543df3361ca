// Copyright (c) 2026 blursynth contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLURSYNTH_BLURSYNTH_HPP
#define BLURSYNTH_BLURSYNTH_HPP

#include "blursynth/blur.hpp"
#include "blursynth/image.hpp"
#include "blursynth/io.hpp"
#include "blursynth/isp.hpp"
#include "blursynth/metrics.hpp"
#include "blursynth/noise.hpp"
#include "blursynth/parallel.hpp"
#include "blursynth/rng.hpp"
#include "blursynth/scene.hpp"

#endif
