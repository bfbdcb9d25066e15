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

#include "canyon/iq_file.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace canyon {

namespace {

constexpr char magic[4] = {'C', 'S', 'I', 'Q'};
constexpr std::uint32_t format_version = 1;
constexpr std::uint32_t kind_capture = 0;
constexpr std::uint32_t kind_reference = 1;

// 64-byte header; see iq_file.hpp for the field map. Stored little-endian;
// this implementation assumes a little-endian host.
#pragma pack(push, 1)
struct FileHeader {
    char magic[4];
    std::uint32_t version;
    std::uint32_t kind;
    std::int32_t angle_bin;
    double sample_rate_hz;
    double carrier_hz;
    std::uint32_t n_snapshots;
    std::uint32_t samples_per_snapshot;
    double aux0;
    double aux1;
    double aux2;
};
#pragma pack(pop)
static_assert(sizeof(FileHeader) == 64, "IQ header must be 64 bytes");

void write_file(const std::string &path, const FileHeader &header,
                const std::complex<float> *samples, std::size_t count) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("iq: cannot open for writing: " +
                                     temp.string());
        out.write(reinterpret_cast<const char *>(&header), sizeof(header));
        out.write(reinterpret_cast<const char *>(samples),
                  static_cast<std::streamsize>(count *
                                               sizeof(std::complex<float>)));
        if (!out)
            throw std::runtime_error("iq: write failed: " + temp.string());
    }
    fs::rename(temp, target);
}

FileHeader read_header(std::ifstream &in, const std::string &path,
                       std::uint32_t expected_kind) {
    FileHeader header{};
    in.read(reinterpret_cast<char *>(&header), sizeof(header));
    if (!in)
        throw std::runtime_error("iq: truncated header: " + path);
    if (std::memcmp(header.magic, magic, sizeof(magic)) != 0)
        throw std::runtime_error("iq: bad magic: " + path);
    if (header.version != format_version)
        throw std::runtime_error("iq: unsupported version: " + path);
    if (header.kind != expected_kind)
        throw std::runtime_error("iq: unexpected record kind: " + path);
    return header;
}

void read_samples(std::ifstream &in, const std::string &path,
                  std::complex<float> *samples, std::size_t count) {
    in.read(reinterpret_cast<char *>(samples),
            static_cast<std::streamsize>(count *
                                         sizeof(std::complex<float>)));
    if (!in)
        throw std::runtime_error("iq: truncated samples: " + path);
}

} // namespace

void write_capture(const std::string &path, const RawCapture &capture) {
    FileHeader header{};
    std::memcpy(header.magic, magic, sizeof(magic));
    header.version = format_version;
    header.kind = kind_capture;
    header.angle_bin = capture.angle_bin;
    header.sample_rate_hz = capture.sample_rate_hz;
    header.carrier_hz = capture.carrier_hz;
    header.n_snapshots = capture.n_snapshots;
    header.samples_per_snapshot = capture.samples_per_snapshot;
    header.aux0 = capture.pointing_azimuth_rad;
    if (capture.iq.size() != static_cast<std::size_t>(capture.n_snapshots) *
                                 capture.samples_per_snapshot)
        throw std::invalid_argument("iq: capture buffer size mismatch");
    write_file(path, header, capture.iq.data(), capture.iq.size());
}

RawCapture read_capture(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("iq: cannot open: " + path);
    const FileHeader header = read_header(in, path, kind_capture);
    RawCapture capture;
    capture.angle_bin = header.angle_bin;
    capture.pointing_azimuth_rad = header.aux0;
    capture.n_snapshots = header.n_snapshots;
    capture.samples_per_snapshot = header.samples_per_snapshot;
    capture.sample_rate_hz = header.sample_rate_hz;
    capture.carrier_hz = header.carrier_hz;
    capture.iq.resize(static_cast<std::size_t>(header.n_snapshots) *
                      header.samples_per_snapshot);
    read_samples(in, path, capture.iq.data(), capture.iq.size());
    return capture;
}

void write_reference(const std::string &path, const ReferenceRecord &reference,
                     double carrier_hz) {
    FileHeader header{};
    std::memcpy(header.magic, magic, sizeof(magic));
    header.version = format_version;
    header.kind = kind_reference;
    header.angle_bin = -1;
    header.sample_rate_hz = reference.sample_rate_hz;
    header.carrier_hz = carrier_hz;
    header.n_snapshots = 1;
    header.samples_per_snapshot =
        static_cast<std::uint32_t>(reference.samples.size());
    header.aux0 = reference.chain_delay_s;
    header.aux1 = reference.chain_gain.real();
    header.aux2 = reference.chain_gain.imag();
    std::vector<std::complex<float>> samples(reference.samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = std::complex<float>(
            static_cast<float>(reference.samples[i].real()),
            static_cast<float>(reference.samples[i].imag()));
    write_file(path, header, samples.data(), samples.size());
}

ReferenceRecord read_reference(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("iq: cannot open: " + path);
    const FileHeader header = read_header(in, path, kind_reference);
    std::vector<std::complex<float>> samples(header.samples_per_snapshot);
    read_samples(in, path, samples.data(), samples.size());
    ReferenceRecord reference;
    reference.sample_rate_hz = header.sample_rate_hz;
    reference.chain_delay_s = header.aux0;
    reference.chain_gain = cdouble(header.aux1, header.aux2);
    reference.samples.resize(samples.size());
    double power = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        reference.samples[i] = cdouble(samples[i].real(), samples[i].imag());
        power += std::norm(reference.samples[i]);
    }
    reference.reference_power =
        samples.empty() ? 0.0 : power / static_cast<double>(samples.size());
    return reference;
}

namespace {

/// Round a double through IEEE binary32. The volatile store keeps the
/// narrowing observable: GCC 11's SLP vectorizer (enabled at -O3) otherwise
/// elides the paired narrow-widen conversions and returns the input bits.
double round_to_float(double x) {
    volatile float narrowed = static_cast<float>(x);
    return static_cast<double>(narrowed);
}

} // namespace

ReferenceRecord quantize_reference(const ReferenceRecord &reference) {
    ReferenceRecord out = reference;
    double power = 0.0;
    for (cdouble &v : out.samples) {
        v = cdouble(round_to_float(v.real()), round_to_float(v.imag()));
        power += std::norm(v);
    }
    out.reference_power =
        out.samples.empty()
            ? 0.0
            : power / static_cast<double>(out.samples.size());
    return out;
}

} // namespace canyon
