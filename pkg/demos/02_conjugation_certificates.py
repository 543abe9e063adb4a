"""
Conjugation certificates over F_2
=================================

A Mizuno representative z is conjugated into a product of simple root
elements u_{i_1} ... u_{i_m}.  If s_{i_1} ... s_{i_m} is reduced and hooks
into the class, the representative meets the right Bruhat cell.
"""

# %%
from e8good.bruhat import Certificate, load_certificates, verify_certificate, normal_form, bruhat_cell
from e8good.chevalley import parse_word, search_good_conjugator, format_word, evaluate, omega_word, simple_u_word
from e8good.weyl import data_dir, read_records

records = {r["name"]: r for r in read_records(data_dir() / "certs" / "table6.dat") if r.get("kind") == "cert"}
z30 = parse_word(records["z_30"]["word"], 2)
print("z_30 =", format_word(z30))

# %%
# Best-first search over omega_j conjugations and characteristic-2 rewriting.
# The height sum is allowed to go up on the way.
res = search_good_conjugator(z30, "E7", 2)
print("omega sequence:", "".join(map(str, res.omega_indices)))
print("target word:", res.target, "after exploring", res.explored, "states")

# %%
# The certificate is checked twice: by 248x248 matrices over F_2 and by the
# symbolic Bruhat normal form.  Both verdicts must agree.
cert = Certificate("E7", "z_30", z30, res.conjugator, [], res.target, 2)
rep = verify_certificate(cert)
print(rep.flags(), "normal form agrees:", rep.conj_nf)

# %%
# The shipped certificate file covers the remaining rows.
reports = [verify_certificate(c) for c in load_certificates() if c.p == 2]
print(sum(r.good for r in reports), "of", len(reports), "certificates verified")

# %%
# The Bruhat-cell lemma behind the method: conjugating a product of simple
# root elements by w0 lands in the cell of the corresponding Weyl element.
from e8good.bruhat import w0_word

w0 = omega_word(w0_word("E8"), 2)
u0 = simple_u_word([1, 3, 4, 2, 5, 6, 7, 8], 2)
print("cell of w0 u0 w0^-1:", bruhat_cell(w0 + u0 + w0.inverse()).reduced_word())
print(normal_form(u0).describe())
