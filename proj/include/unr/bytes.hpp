#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace unr {

using Bytes = std::vector<uint8_t>;

// Little-endian byte writer used by every canonical serialization in the
// project. Canonical encodings feed both the Fiat-Shamir hash and the file
// digests, so they must stay bit-exact across versions.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
    }
    // LEB128, used for sparse constraint entries.
    void varint(uint64_t v) {
        while (v >= 0x80) {
            buf_.push_back(uint8_t(v) | 0x80);
            v >>= 7;
        }
        buf_.push_back(uint8_t(v));
    }
    void raw(const uint8_t* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
    void raw(const Bytes& b) { raw(b.data(), b.size()); }
    void str(const std::string& s) {
        varint(s.size());
        raw(reinterpret_cast<const uint8_t*>(s.data()), s.size());
    }
    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* p, size_t n) : p_(p), n_(n) {}
    explicit ByteReader(const Bytes& b) : p_(b.data()), n_(b.size()) {}

    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        const uint8_t* p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        const uint8_t* p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
        return v;
    }
    uint64_t varint() {
        uint64_t v = 0;
        int shift = 0;
        while (true) {
            uint8_t b = u8();
            v |= uint64_t(b & 0x7f) << shift;
            if (!(b & 0x80)) break;
            shift += 7;
            if (shift >= 64) throw std::runtime_error("varint overflow");
        }
        return v;
    }
    Bytes raw(size_t n) {
        const uint8_t* p = take(n);
        return Bytes(p, p + n);
    }
    std::string str() {
        size_t n = varint();
        const uint8_t* p = take(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }
    size_t remaining() const { return n_ - pos_; }
    bool done() const { return pos_ == n_; }

private:
    const uint8_t* take(size_t n) {
        if (pos_ + n > n_) throw std::runtime_error("byte reader: truncated input");
        const uint8_t* p = p_ + pos_;
        pos_ += n;
        return p;
    }
    const uint8_t* p_;
    size_t n_;
    size_t pos_ = 0;
};

std::string hex_encode(const Bytes& b);
Bytes hex_decode(const std::string& s);

}  // namespace unr
