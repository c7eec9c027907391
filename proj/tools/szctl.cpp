// szctl: operator CLI for Secure Zone key ceremonies, broadcasts, offline
// assessment, fault injection, and simulation. Batch-only: clocks and seeds
// are explicit flags, so every command is reproducible.
//
// Exit codes: 0 success (assess: AUTHORIZED), 1 assess non-authorized,
// 2 usage error, 3 crypto/state error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "securezone/securezone.hpp"

namespace {

using namespace securezone;

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("cannot read file: " + path);
  return data;
}

void write_file(const std::string& path, std::span<const Byte> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("cannot write file: " + path);
}

void write_file(const std::string& path, std::string_view text) {
  write_file(path, std::span<const Byte>(reinterpret_cast<const Byte*>(text.data()),
                                         text.size()));
}

std::string fingerprint(std::span<const Byte> data) {
  const Digest d = hash(data);
  return to_hex(std::span<const Byte>(d.bytes).first(8));
}

AttributeSet to_attribute_set(const std::vector<std::string>& attrs) {
  return AttributeSet(attrs.begin(), attrs.end());
}

int cmd_ca_init(std::uint64_t seed, const std::vector<std::string>& attrs,
                const std::string& out) {
  DeterministicRng rng(seed);
  CentralAuthority ca = ca_setup(rng, to_attribute_set(attrs));
  write_file(out, serialize_central_authority(ca));
  std::cout << "ca initialized attrs=" << ca.universe.size()
            << " signing-key=" << fingerprint(ca.signing.public_key)
            << " out=" << out << "\n";
  return 0;
}

int cmd_sza_register(const std::string& ca_path, std::uint32_t sza_id, const std::string& policy,
                     std::uint64_t seed, const std::string& out, const std::string& cert_out) {
  CentralAuthority ca = parse_central_authority(read_file(ca_path));
  DeterministicRng rng(seed);
  SzaState sza = sza_create(ca, sza_id, parse_policy(policy), rng);
  write_file(ca_path, serialize_central_authority(ca));
  write_file(out, serialize_sza_state(sza));
  if (!cert_out.empty()) write_file(cert_out, serialize_certificate_file(sza.certificate));
  ByteWriter cert;
  write_certificate(cert, sza.certificate);
  std::cout << "sza registered id=" << sza_id << " policy=\"" << serialize_policy(sza.policy)
            << "\" certificate=" << fingerprint(cert.bytes()) << " out=" << out << "\n";
  return 0;
}

int cmd_firearm_register(const std::string& ca_path, const std::vector<std::string>& attrs,
                         std::uint64_t firearm_id, std::uint64_t user_id, std::uint64_t expires,
                         std::uint64_t issued_at, std::uint64_t seed, const std::string& out) {
  CentralAuthority ca = parse_central_authority(read_file(ca_path));
  DeterministicRng rng(seed);
  FirearmKeyBundle bundle =
      firearm_register(ca, to_attribute_set(attrs), firearm_id, user_id, expires, issued_at, rng);
  const Bytes data = serialize_key_bundle(bundle);
  write_file(out, data);
  std::cout << "firearm registered id=" << firearm_id << " user=" << user_id
            << " expires=" << expires << " bundle=" << fingerprint(data) << " out=" << out
            << "\n";
  return 0;
}

int cmd_zone_broadcast(const std::string& sza_path, std::uint64_t at, std::uint32_t window,
                       std::uint64_t seed, const std::string& out) {
  SzaState sza = parse_sza_state(read_file(sza_path));
  DeterministicRng rng(seed);
  const Bytes msg = compose_zone_message(sza, at, rng, window);
  write_file(out, msg);
  std::cout << "broadcast id=" << sza.sza_id << " ts=" << at << " bytes=" << msg.size()
            << " message=" << fingerprint(msg) << " out=" << out << "\n";
  return 0;
}

int cmd_firearm_assess(const std::string& bundle_path, const std::string& msg_path,
                       std::uint64_t at, std::uint32_t window) {
  FirearmKeyBundle bundle = parse_key_bundle(read_file(bundle_path));
  const Bytes msg = read_file(msg_path);
  const AdvisoryOutcome outcome = assess(bundle, msg, at, window);
  std::cout << advisory_token(outcome.kind) << " " << outcome.detail << "\n";
  return outcome.authorized() ? 0 : 1;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out) {
  const Bytes text = read_file(scenario_path);
  const Scenario sc = parse_scenario(std::string_view(
      reinterpret_cast<const char*>(text.data()), text.size()));
  const EventLog log = run(sc);
  write_file(out, event_log_to_jsonl(log));
  std::cout << summary_to_text(report(log));
  return 0;
}

int cmd_tamper(const std::string& in, const std::string& out, std::uint64_t byte_index) {
  Bytes data = read_file(in);
  if (byte_index >= data.size()) {
    throw Error("byte offset " + std::to_string(byte_index) + " outside file of " +
                std::to_string(data.size()) + " bytes");
  }
  data[byte_index] ^= 0xff;
  write_file(out.empty() ? in : out, data);
  std::cout << "flipped byte " << byte_index << " of " << in << "\n";
  return 0;
}

int cmd_inspect(const std::string& path) {
  const Bytes data = read_file(path);
  const std::string_view head(reinterpret_cast<const char*>(data.data()),
                              std::min<std::size_t>(data.size(), 6));
  if (head.starts_with(kCaStateFileMagic)) {
    CentralAuthority ca = parse_central_authority(data);
    std::cout << "ca signing-key=" << fingerprint(ca.signing.public_key) << "\n";
    std::cout << "universe:";
    for (const auto& a : ca.universe) std::cout << " " << a;
    std::cout << "\nregistered-szas:";
    for (const auto& [id, cert] : ca.sza_registry) std::cout << " " << id;
    std::cout << "\n";
    return 0;
  }
  if (head.starts_with(kSzaStateFileMagic)) {
    SzaState sza = parse_sza_state(data);
    std::cout << "sza id=" << sza.sza_id << " policy=\"" << serialize_policy(sza.policy)
              << "\" public-key=" << fingerprint(sza.signing.public_key) << "\n";
    return 0;
  }
  if (head.starts_with(kBundleFileMagic)) {
    FirearmKeyBundle b = parse_key_bundle(data);
    std::cout << "bundle firearm=" << b.firearm_id << " user=" << b.user_id
              << " expires=" << b.expires_at << " suite=" << int(b.suite) << "\nattributes:";
    for (const auto& a : b.secret_key.attributes()) std::cout << " " << a;
    std::cout << "\nca-key=" << fingerprint(b.ca_public_key) << "\n";
    return 0;
  }
  if (head.starts_with(kCertificateFileMagic)) {
    Certificate cert = parse_certificate_file(data);
    std::cout << "certificate sza=" << cert.sza_id
              << " public-key=" << fingerprint(cert.sza_public_key) << "\n";
    return 0;
  }
  if (head.starts_with(kZoneMessageMagic)) {
    ZoneMessage msg = parse_zone_message(data);
    std::cout << "message suite=" << int(msg.suite) << " policy=\"" << msg.policy_text
              << "\" bytes=" << data.size() << "\n";
    return 0;
  }
  throw Error("unrecognized file format: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure Zone toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ca init
  auto* ca = app.add_subcommand("ca", "central authority ceremonies");
  ca->require_subcommand(1);
  {
    auto* init = ca->add_subcommand("init", "create a CA state file");
    auto seed = std::make_shared<std::uint64_t>(0);
    auto attrs = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    init->add_option("--seed", *seed, "deterministic seed")->required();
    init->add_option("--attr", *attrs, "attribute in the managed universe (repeatable)");
    init->add_option("--out", *out, "output CA state file")->required();
    init->callback([=, &action] { action = [=] { return cmd_ca_init(*seed, *attrs, *out); }; });
  }

  // sza register
  auto* sza = app.add_subcommand("sza", "zone authority ceremonies");
  sza->require_subcommand(1);
  {
    auto* reg = sza->add_subcommand("register", "register a zone authority with the CA");
    auto ca_path = std::make_shared<std::string>();
    auto id = std::make_shared<std::uint32_t>(0);
    auto policy = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    auto cert_out = std::make_shared<std::string>();
    reg->add_option("--ca", *ca_path, "CA state file (updated in place)")->required();
    reg->add_option("--sza-id", *id, "zone authority id")->required();
    reg->add_option("--policy", *policy, "zone policy text")->required();
    reg->add_option("--seed", *seed, "deterministic seed")->required();
    reg->add_option("--out", *out, "output SZA state file")->required();
    reg->add_option("--cert-out", *cert_out, "also export the certificate file");
    reg->callback([=, &action] {
      action = [=] { return cmd_sza_register(*ca_path, *id, *policy, *seed, *out, *cert_out); };
    });
  }

  // firearm register / assess
  auto* firearm = app.add_subcommand("firearm", "firearm registration and assessment");
  firearm->require_subcommand(1);
  {
    auto* reg = firearm->add_subcommand("register", "issue a firearm key bundle");
    auto ca_path = std::make_shared<std::string>();
    auto attrs = std::make_shared<std::vector<std::string>>();
    auto fid = std::make_shared<std::uint64_t>(0);
    auto uid = std::make_shared<std::uint64_t>(0);
    auto expires = std::make_shared<std::uint64_t>(0);
    auto issued = std::make_shared<std::uint64_t>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    reg->add_option("--ca", *ca_path, "CA state file")->required();
    reg->add_option("--attr", *attrs, "granted attribute (repeatable)")->required();
    reg->add_option("--firearm-id", *fid, "firearm id")->required();
    reg->add_option("--user-id", *uid, "user id")->required();
    reg->add_option("--expires", *expires, "key expiration time et (POSIX seconds)")->required();
    reg->add_option("--issued-at", *issued, "issuance clock (POSIX seconds)");
    reg->add_option("--seed", *seed, "deterministic seed")->required();
    reg->add_option("--out", *out, "output bundle file")->required();
    reg->callback([=, &action] {
      action = [=] {
        return cmd_firearm_register(*ca_path, *attrs, *fid, *uid, *expires, *issued, *seed, *out);
      };
    });

    auto* ass = firearm->add_subcommand("assess", "assess a received zone message");
    auto bundle = std::make_shared<std::string>();
    auto message = std::make_shared<std::string>();
    auto at = std::make_shared<std::uint64_t>(0);
    auto window = std::make_shared<std::uint32_t>(kDefaultTokenWindow);
    ass->add_option("--bundle", *bundle, "firearm key bundle file")->required();
    ass->add_option("--message", *message, "zone message file")->required();
    ass->add_option("--at", *at, "firearm clock (POSIX seconds)")->required();
    ass->add_option("--window", *window, "token window seconds");
    ass->callback([=, &action] {
      action = [=] { return cmd_firearm_assess(*bundle, *message, *at, *window); };
    });
  }

  // zone broadcast
  auto* zone = app.add_subcommand("zone", "zone transmissions");
  zone->require_subcommand(1);
  {
    auto* bc = zone->add_subcommand("broadcast", "compose one zone message");
    auto sza_path = std::make_shared<std::string>();
    auto at = std::make_shared<std::uint64_t>(0);
    auto window = std::make_shared<std::uint32_t>(kDefaultTokenWindow);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    bc->add_option("--sza", *sza_path, "SZA state file")->required();
    bc->add_option("--at", *at, "zone clock (POSIX seconds)")->required();
    bc->add_option("--window", *window, "token window seconds");
    bc->add_option("--seed", *seed, "deterministic seed");
    bc->add_option("--out", *out, "output message file")->required();
    bc->callback([=, &action] {
      action = [=] { return cmd_zone_broadcast(*sza_path, *at, *window, *seed, *out); };
    });
  }

  // simulate
  {
    auto* sim = app.add_subcommand("simulate", "run a scenario and write its event log");
    auto scenario = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sim->add_option("--scenario", *scenario, "scenario JSON file")->required();
    sim->add_option("--out", *out, "output JSONL log file")->required();
    sim->callback([=, &action] { action = [=] { return cmd_simulate(*scenario, *out); }; });
  }

  // tamper
  {
    auto* tam = app.add_subcommand("tamper", "flip one byte of a file (fault injection)");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto byte_index = std::make_shared<std::uint64_t>(0);
    tam->add_option("--in", *in, "input file")->required();
    tam->add_option("--out", *out, "output file (default: in place)");
    tam->add_option("--byte", *byte_index, "byte offset to flip")->required();
    tam->callback([=, &action] { action = [=] { return cmd_tamper(*in, *out, *byte_index); }; });
  }

  // inspect
  {
    auto* ins = app.add_subcommand("inspect", "print the contents of a state or message file");
    auto file = std::make_shared<std::string>();
    ins->add_option("--file", *file, "file to inspect")->required();
    ins->callback([=, &action] { action = [=] { return cmd_inspect(*file); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "szctl: error code=2 msg=\"usage: " << e.get_name() << "\"\n";
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    std::cerr << "szctl: error code=3 msg=\"" << e.what() << "\"\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "szctl: error code=3 msg=\"" << e.what() << "\"\n";
    return 3;
  }
}
