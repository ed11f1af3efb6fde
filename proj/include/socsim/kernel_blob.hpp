// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace socsim::backends {

/// Layer kinds a device kernel can implement. The id doubles as the
/// work-item formula selector in the GPU cost model.
enum class LayerKind : std::uint8_t {
    conv2d = 0,
    maxpool2d = 1,
    upsample2d = 2,
    activation = 3,
};

const char* layer_kind_name(LayerKind k);

/// Serialized device-kernel descriptor, the stand-in for a precompiled
/// kernel binary embedded into host code.
///
/// Wire format (little-endian):
///   magic[4] = "MSKB", u32 version, u16 name_len, name bytes,
///   u8 layer_kind, u32 payload_len, payload bytes.
struct KernelBlob {
    std::uint32_t version = 1;
    std::string name;
    LayerKind kind = LayerKind::conv2d;
    std::vector<std::uint8_t> payload;

    bool operator==(const KernelBlob&) const = default;
};

inline constexpr std::uint32_t kKernelBlobVersion = 1;

std::vector<std::uint8_t> embed_blob(const KernelBlob& blob);
KernelBlob load_blob(const std::vector<std::uint8_t>& bytes);

}  // namespace socsim::backends
