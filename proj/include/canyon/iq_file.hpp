// SPDX-License-Identifier: Apache-2.0
//
// canyon-sounder: simulation and processing toolkit for directional
// correlation channel sounding in street canyons
// Copyright (C) 2026 The canyon-sounder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>

#include "canyon/sounder.hpp"
#include "canyon/waveform.hpp"

namespace canyon {

/// Binary IQ container: 64-byte little-endian header followed by
/// interleaved float32 I/Q samples, snapshot-major.
///
///   offset  size  field
///        0     4  magic "CSIQ"
///        4     4  u32 format version (1)
///        8     4  u32 record kind: 0 = rotation capture, 1 = reference
///       12     4  i32 angle bin (-1 for reference)
///       16     8  f64 sample rate [Hz]
///       24     8  f64 carrier [Hz]
///       32     4  u32 snapshot count
///       36     4  u32 samples per snapshot
///       40     8  f64 pointing azimuth [rad]   (capture) | chain delay [s] (reference)
///       48     8  f64 reserved                 (capture) | chain gain, real (reference)
///       56     8  f64 reserved                 (capture) | chain gain, imag (reference)
void write_capture(const std::string &path, const RawCapture &capture);
RawCapture read_capture(const std::string &path);

/// The reference is stored through the same float32 container so that a
/// staged run (write then read) and a fused in-memory run see bit-identical
/// data. Reading back returns the float32-quantized samples as doubles.
void write_reference(const std::string &path, const ReferenceRecord &reference,
                     double carrier_hz);
ReferenceRecord read_reference(const std::string &path);

/// Round samples through float32 in place; the in-memory pipeline applies
/// this to match what a file round-trip would produce.
ReferenceRecord quantize_reference(const ReferenceRecord &reference);

} // namespace canyon
