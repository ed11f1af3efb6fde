// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/kernel_blob.hpp"

#include <stdexcept>

namespace socsim::backends {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'K', 'B'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

struct Reader {
    const std::vector<std::uint8_t>& bytes;
    size_t pos = 0;

    void need(size_t n, const char* what) {
        if (pos + n > bytes.size()) {
            throw std::runtime_error(std::string("kernel blob truncated while reading ") + what);
        }
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes[pos++];
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
};

}  // namespace

const char* layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::conv2d: return "conv2d";
        case LayerKind::maxpool2d: return "maxpool2d";
        case LayerKind::upsample2d: return "upsample2d";
        case LayerKind::activation: return "activation";
    }
    return "unknown";
}

std::vector<std::uint8_t> embed_blob(const KernelBlob& blob) {
    if (blob.name.size() > 0xffff) throw std::invalid_argument("kernel blob name too long");
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, blob.version);
    put_u16(out, static_cast<std::uint16_t>(blob.name.size()));
    out.insert(out.end(), blob.name.begin(), blob.name.end());
    out.push_back(static_cast<std::uint8_t>(blob.kind));
    put_u32(out, static_cast<std::uint32_t>(blob.payload.size()));
    out.insert(out.end(), blob.payload.begin(), blob.payload.end());
    return out;
}

KernelBlob load_blob(const std::vector<std::uint8_t>& bytes) {
    Reader r{bytes};
    r.need(4, "magic");
    for (int i = 0; i < 4; ++i) {
        if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) {
            throw std::runtime_error("not a kernel blob (bad magic)");
        }
    }
    r.pos = 4;
    KernelBlob blob;
    blob.version = r.u32("version");
    if (blob.version != kKernelBlobVersion) {
        throw std::runtime_error("unsupported kernel blob version " + std::to_string(blob.version));
    }
    std::uint16_t name_len = r.u16("name length");
    r.need(name_len, "name");
    blob.name.assign(bytes.begin() + r.pos, bytes.begin() + r.pos + name_len);
    r.pos += name_len;
    std::uint8_t kind = r.u8("layer kind");
    if (kind > static_cast<std::uint8_t>(LayerKind::activation)) {
        throw std::runtime_error("kernel blob has unknown layer kind " + std::to_string(kind));
    }
    blob.kind = static_cast<LayerKind>(kind);
    std::uint32_t payload_len = r.u32("payload length");
    r.need(payload_len, "payload");
    blob.payload.assign(bytes.begin() + r.pos, bytes.begin() + r.pos + payload_len);
    r.pos += payload_len;
    return blob;
}

}  // namespace socsim::backends
